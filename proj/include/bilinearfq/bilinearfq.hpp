#ifndef BILINEARFQ_BILINEARFQ_HPP
#define BILINEARFQ_BILINEARFQ_HPP

#include "bilinear.hpp"
#include "config.hpp"
#include "counting.hpp"
#include "error.hpp"
#include "finite_field.hpp"
#include "fourier.hpp"
#include "parallel.hpp"
#include "prng.hpp"
#include "serialize.hpp"
#include "sets.hpp"
#include "verify.hpp"
#include "waring.hpp"

#endif  // BILINEARFQ_BILINEARFQ_HPP
