#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "bilinearfq/config.hpp"
#include "bilinearfq/serialize.hpp"

using namespace bfq;

namespace {

struct RunResult {
    int status;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(BILINEARFQ_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int raw = ::pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / ("bilinearfq_test_" + name);
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST(Config, ParseForms) {
    const Field f = make_prime_field(5);
    EXPECT_EQ(parse_form(f, 2, "dot").entry(1, 1).code, 1u);
    EXPECT_EQ(parse_form(f, 2, "diag:3").entry(1, 1).code, 3u);
    const BilinearForm m = parse_form(f, 2, "[[1,2],[0,1]]");
    EXPECT_EQ(m.entry(0, 1).code, 2u);
    EXPECT_THROW(parse_form(f, 2, "[[1,2],[2,4]]"), Error);
    EXPECT_THROW(parse_form(f, 3, "[[1,0],[0,1]]"), Error);
    EXPECT_THROW(parse_form(f, 2, "nonsense"), Error);
}

TEST(Config, ParseSets) {
    const VectorSpace space(make_prime_field(3), 2);
    EXPECT_EQ(parse_set(space, "full").size(), 9u);
    EXPECT_EQ(parse_set(space, "punctured-full").size(), 8u);
    EXPECT_EQ(parse_set(space, "star-grid").size(), 4u);
    EXPECT_EQ(parse_set(space, "random:0.5:11"), parse_set(space, "random:0.5:11"));
    const auto path = temp_file("set.json", "[[1,2],[0,0],[1,2]]");
    const VectorSet s = parse_set(space, "file:" + path.string());
    EXPECT_EQ(s.indices(), (std::vector<std::uint64_t>{0, 7}));
    EXPECT_EQ(to_json(s).dump(), "[[0,0],[1,2]]");
    EXPECT_THROW(parse_set(space, "random:2:1"), Error);
    EXPECT_THROW(parse_set(space, "no-such-thing"), Error);
}

TEST(Config, ParseLambdasAndEdges) {
    const Field f = make_prime_field(5);
    EXPECT_EQ(parse_lambdas(f, "all").size(), 4u);
    EXPECT_EQ(parse_lambdas(f, "all", true).size(), 5u);
    EXPECT_EQ(parse_lambdas(f, "2,3")[1].code, 3u);
    EXPECT_THROW(parse_lambdas(f, "7"), Error);
    const auto edges = parse_edges(f, "1-2:1,3-2:4");
    ASSERT_EQ(edges.size(), 2u);
    EXPECT_EQ(edges[1].i, 1u);
    EXPECT_EQ(edges[1].j, 2u);
    EXPECT_EQ(edges[1].lambda.code, 4u);
    EXPECT_THROW(parse_edges(f, "0-1:1"), Error);
    EXPECT_THROW(parse_edges(f, "1-2"), Error);
}

TEST(Config, JsonOverrides) {
    ExperimentConfig c;
    apply_json(c, Json::parse(R"({"p": 7, "d": 3, "sets": "full,star-grid", "lambda": 2, "restrict": true})"));
    EXPECT_EQ(c.p, 7u);
    EXPECT_EQ(c.d, 3u);
    EXPECT_EQ(c.sets, (std::vector<std::string>{"full", "star-grid"}));
    EXPECT_EQ(c.lambda, "2");
    EXPECT_TRUE(c.restrict_to_hyperplanes);
    EXPECT_THROW(apply_json(c, Json::parse("[1]")), Error);
}

TEST(Serialize, FieldAndGridRoundTrip) {
    const Field f = make_extension_field(2, 3);
    EXPECT_EQ(field_from_json(to_json(f)), f);
    const VectorSpace space(f, 2);
    GridFunction g(space);
    g[5] = {0.25, -1.5};
    const GridFunction back = grid_from_json(to_json(g));
    EXPECT_EQ(back.values, g.values);
}

TEST(Cli, CountPairsExample) {
    const auto r = run_cli("count-pairs --p 5 --d 2 --form dot --sets full,full --lambda 1");
    EXPECT_EQ(r.status, 0);
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["exact_count"], 120);
    EXPECT_EQ(j["bound_satisfied"], true);
}

TEST(Cli, CsvCarriesTheSameNumbers) {
    const std::string args = "count-pairs --p 7 --d 2 --form diag:3 --sets random:0.4:1,random:0.6:2 --lambda 2";
    const Json j = Json::parse(run_cli(args).out);
    const auto csv = run_cli(args + " --csv").out;
    EXPECT_EQ(csv.substr(0, csv.find('\n')), count_csv_header());
    const std::string row = csv.substr(csv.find('\n') + 1);
    const auto cells = split(row.substr(0, row.find('\n')), ',');
    ASSERT_EQ(cells.size(), 9u);
    EXPECT_EQ(cells[3], j["exact_count"].dump());
    EXPECT_DOUBLE_EQ(std::stod(cells[4]), j["main_term"].get<double>());
    EXPECT_DOUBLE_EQ(std::stod(cells[5]), j["error_bound"].get<double>());
    EXPECT_DOUBLE_EQ(std::stod(cells[7]), j["relative_deviation"].get<double>());
}

TEST(Cli, LambdaScanIsOrdered) {
    const auto r = run_cli("variance --p 5 --d 2 --sets random:0.5:3 --lambda all");
    EXPECT_EQ(r.status, 0);
    int lines = 0;
    for (char c : r.out) lines += c == '\n';
    EXPECT_EQ(lines, 4);
}

TEST(Cli, WaringExample) {
    const auto r = run_cli("waring --k 2 --p 5");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(Json::parse(r.out)["gamma"], 2);
}

TEST(Cli, ConfigFileOverridesFlags) {
    const auto path = temp_file("cfg.json", R"({"p": 3, "d": 2, "sets": ["full", "full"], "lambda": "2"})");
    const auto r = run_cli("count-pairs --p 5 --config " + path.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(Json::parse(r.out)["exact_count"], 8 * 3);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("count-pairs --p 4 --sets full,full").status, 2);
    EXPECT_EQ(run_cli("count-pairs --p 5 --sets full").status, 2);
    EXPECT_EQ(run_cli("count-pairs --p 5 --sets full,full --lambda 0").status, 2);
    EXPECT_EQ(run_cli("count-pairs --bogus").status, 2);
    EXPECT_EQ(run_cli("count-pairs --p 5 --d 3 --sets full,full --guardrail 100").status, 3);
    EXPECT_EQ(run_cli("verify-all --p 3 --d 2 --seed 7").status, 0);
}

TEST(Cli, SystemAndTriples) {
    const auto sys = run_cli("system --p 3 --d 2 --sets full,full,full --edges 1-2:1,1-3:2 --csv");
    EXPECT_EQ(sys.status, 0);
    EXPECT_NE(sys.out.find("3,2,9;9;9,"), std::string::npos);
    const auto tri = run_cli("triples --p 5 --d 2 --sets star-grid,star-grid,star-grid --materialize");
    EXPECT_EQ(tri.status, 0);
    const Json j = Json::parse(tri.out);
    EXPECT_EQ(j["total"], 64);
    EXPECT_EQ(j["triples"].size(), j["count"].get<std::size_t>());
}

TEST(Cli, ValueSetWithRestriction) {
    const auto r = run_cli("value-set --p 5 --d 3 --sets full,full --lambda 1,2 --a 1,0,0 --restrict");
    EXPECT_EQ(r.status, 0);
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["size"], 5);
    EXPECT_EQ(j["bound_holds"], true);
    const auto sm = run_cli("second-moment --p 5 --d 3 --sets full,full --lambda 1,2 --a 1,0,0 --restrict");
    EXPECT_EQ(sm.status, 0);
    EXPECT_EQ(Json::parse(sm.out)["holds"], true);
}
