#include <doctest.h>

#include "config.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "experiments.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

using namespace mhtc;
using io::KeyValues;

namespace {

const char* kSampleConfig = R"(# sample scenario
channel.model = rayleigh
channel.alpha = 4
channel.beta = 1
net.lambda = 0.1
net.gamma = 0.5
net.r = 4
net.m = 1
net.d = inf
analyze.epsilon = 0.3
analyze.lambda = 0.1
analyze.m = 1
)";

} // namespace

TEST_CASE("config parses, serializes, and round-trips") {
    const KeyValues kv = KeyValues::parse_text(kSampleConfig);
    const std::string canon = kv.serialize();
    const KeyValues again = KeyValues::parse_text(canon);
    CHECK(again.entries() == kv.entries());
    CHECK(again.serialize() == canon);

    const io::Experiment ex = io::resolve(kv);
    CHECK(ex.net.lambda == 0.1);
    CHECK(ex.net.unbounded());
    CHECK(ex.fading.alpha == 4.0);
    CHECK(ex.net.hop.K == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-13));
}

TEST_CASE("config diagnostics carry line and field information") {
    try {
        KeyValues::parse_text("channel.model = rayleigh\nbogus line\n", "test.cfg");
        FAIL("expected parse error");
    } catch (const error& e) {
        CHECK(std::string(e.what()).find("test.cfg:2") != std::string::npos);
    }
    try {
        auto kv = KeyValues::parse_text("net.lambda = abc\n", "test.cfg");
        kv.get_double("net.lambda", 0.0);
        FAIL("expected field error");
    } catch (const error& e) {
        const std::string what = e.what();
        CHECK(what.find("net.lambda") != std::string::npos);
        CHECK(what.find("test.cfg:1") != std::string::npos);
    }
    try {
        io::resolve(KeyValues::parse_text("nett.lambda = 1\n", "test.cfg"));
        FAIL("expected unknown-key error");
    } catch (const error& e) {
        CHECK(std::string(e.what()).find("nett.lambda") != std::string::npos);
    }
    // overrides that violate invariants are rejected
    KeyValues kv = KeyValues::parse_text(kSampleConfig);
    kv.set("net.lambda", "0");
    CHECK_THROWS_AS(io::resolve(kv), error);
}

TEST_CASE("grid syntax") {
    KeyValues kv = KeyValues::parse_text("a = 1,2,3\nb = lin:0:1:5\nc = log:0.1:10:3\n");
    CHECK(kv.get_grid("a", {}) == std::vector<double>{1.0, 2.0, 3.0});
    const auto lin = kv.get_grid("b", {});
    REQUIRE(lin.size() == 5);
    CHECK(lin[1] == doctest::Approx(0.25));
    const auto lg = kv.get_grid("c", {});
    REQUIRE(lg.size() == 3);
    CHECK(lg[1] == doctest::Approx(1.0).epsilon(1e-12));
    KeyValues bad = KeyValues::parse_text("g = lin:0:1\n");
    CHECK_THROWS_AS(bad.get_grid("g", {}), error);
}

TEST_CASE("csv writer enforces the declared width") {
    io::CsvWriter w("test", 1);
    w.header({"a", "b"});
    w.field(1.0);
    CHECK_THROWS_AS(w.end_row(), error);
}

TEST_CASE("analyze emits the worked single-point row") {
    const io::Experiment ex = io::resolve(KeyValues::parse_text(kSampleConfig));
    const auto out = exp::analyze(ex);
    REQUIRE(out.rows == 1);
    CHECK(out.valid_rows == 1);
    // last line: lambda,m,D,policy,expected,outage,tc,valid
    std::stringstream ss(out.csv);
    std::string line, last;
    std::string header;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header.empty()) {
            header = line;
            continue;
        }
        last = line;
    }
    CHECK(header == "lambda,m,D,policy,expected_sets,outage_bound,tc_bound,valid");
    REQUIRE_FALSE(last.empty());
    std::stringstream row(last);
    std::string tok;
    std::vector<std::string> cells;
    while (std::getline(row, tok, ',')) cells.push_back(tok);
    REQUIRE(cells.size() == 8);
    const double expected = std::stod(cells[4]);
    const double outage = std::stod(cells[5]);
    CHECK(expected == doctest::Approx(0.5 * std::exp(-0.4 * M_PI)).epsilon(1e-10));
    CHECK(outage == doctest::Approx(std::exp(-0.5 * std::exp(-0.4 * M_PI))).epsilon(1e-10));
    CHECK(cells[7] == "1");
}

TEST_CASE("analyze with an empty grid emits a header-only table") {
    KeyValues kv = KeyValues::parse_text(kSampleConfig);
    kv.set("analyze.lambda", "");
    const auto out = exp::analyze(io::resolve(kv));
    CHECK(out.rows == 0);
    std::stringstream ss(out.csv);
    std::string line;
    size_t data_lines = 0;
    bool saw_header = false;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            saw_header = true;
            continue;
        }
        ++data_lines;
    }
    CHECK(saw_header);
    CHECK(data_lines == 0);
}

TEST_CASE("simulate CSV is reproducible byte for byte") {
    KeyValues kv = KeyValues::parse_text(kSampleConfig);
    kv.set("net.d", "25");
    kv.set("sim.window", "50");
    kv.set("sim.trials", "1000");
    kv.set("sim.seed", "7");
    kv.set("net.gamma", "0.25");
    const io::Experiment ex = io::resolve(kv);
    const auto a = exp::simulate(ex);
    const auto b = exp::simulate(ex);
    CHECK(a.csv == b.csv);
    CHECK(a.csv.find("lambda,m,mode,trials,outage_mean,outage_std,seed") != std::string::npos);

    // golden schema pin: header comments announce version and seed
    CHECK(a.csv.rfind("# mhtc ", 0) == 0);
    CHECK(a.csv.find("# seed = 7") != std::string::npos);
    CHECK(a.csv.find("# config net.gamma = 0.25") != std::string::npos);
}

namespace {

// Strip the version banner: the build stamp changes run to run, the payload
// must not.
std::string without_banner(const std::string& csv) {
    std::stringstream ss(csv);
    std::string line, out;
    while (std::getline(ss, line)) {
        if (line.rfind("# mhtc ", 0) == 0) continue;
        out += line;
        out += '\n';
    }
    return out;
}

} // namespace

TEST_CASE("simulate matches the golden file") {
    KeyValues kv = KeyValues::parse_text(kSampleConfig);
    kv.set("net.d", "25");
    kv.set("net.gamma", "0.25");
    kv.set("sim.window", "50");
    kv.set("sim.trials", "1000");
    kv.set("sim.seed", "20260810");
    const auto out = exp::simulate(io::resolve(kv));
    std::ifstream golden(std::string(TEST_DATA_DIR) + "/sim_golden.csv", std::ios::binary);
    REQUIRE(golden.good());
    std::stringstream ss;
    ss << golden.rdbuf();
    CHECK(without_banner(out.csv) == without_banner(ss.str()));
}
