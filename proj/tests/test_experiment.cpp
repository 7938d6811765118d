#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "mpemba/errors.hpp"
#include "mpemba/experiment.hpp"
#include "mpemba/io.hpp"

using namespace mpemba;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_experiment_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("mpemba_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("config parsing") {
    const auto c = parse_experiment_config(R"({"J": 1, "g0_over_J": 0.2, "M": "auto", "horizon": 100})");
    CHECK(!c.M.has_value());
    CHECK(c.auto_M() == 2 * 1 * 100 + 8);
    CHECK(parse_experiment_config(R"({"t_f": 80, "horizon": 100})").auto_M() == 328);
    CHECK(parse_experiment_config(R"({"M": 300})").resolved_M() == 300);
    CHECK(parse_experiment_config(R"({"curves": ["dark"]})").curves.size() == 1);

    CHECK(error_of(R"({"J": 1, "colour": 3})").find("colour") != std::string::npos);
    CHECK(error_of(R"({"J": -1})").find("'J'") != std::string::npos);
    CHECK(error_of(R"({"sample_step": 0})").find("sample_step") != std::string::npos);
    CHECK(error_of(R"({"curves": ["hot"]})").find("curves") != std::string::npos);
    CHECK(error_of(R"({"M": 1.5})").find("'M'") != std::string::npos);
    CHECK(error_of("{\n \"J\": }").find("line 2") != std::string::npos);
}

TEST_CASE("guard failure names the required size") {
    auto c = parse_experiment_config(R"({"M": 50, "horizon": 120})");
    try {
        compute_experiment(c);
        FAIL("expected GuardError");
    } catch (const GuardError& e) {
        CHECK(std::string(e.what()).find("248") != std::string::npos);
    }
}

TEST_CASE("canonical-only run writes outputs and is deterministic") {
    auto c = parse_experiment_config(R"({"horizon": 30, "curves": ["canonical"]})");
    const auto dir = scratch("canonical");
    run_experiment(c, dir / "a");
    run_experiment(c, dir / "b");
    for (const char* f : {"curves.csv", "curves_log.csv", "summary.json", "states/canonical.json"}) {
        REQUIRE(std::filesystem::exists(dir / "a" / f));
        CHECK(io::read_text(dir / "a" / f) == io::read_text(dir / "b" / f));
    }
    const auto csv = io::read_text(dir / "a" / "curves.csv");
    CHECK(csv.rfind("t,D_canonical,D_time_reversed,D_dark\n0,1,,\n", 0) == 0);
    const auto summary = nlohmann::json::parse(io::read_text(dir / "a" / "summary.json"));
    CHECK(summary["schema_version"] == 1);
    CHECK(summary["crossings"].is_object());
    std::filesystem::remove_all(dir);
}

TEST_CASE("reference configuration") {
    ExperimentConfig c;  // defaults are the reference study
    const auto r = compute_experiment(c);
    CHECK(r.guard.passed);
    CHECK(r.guard.M == 248);
    REQUIRE(r.curves.size() == 3);
    REQUIRE(r.markov);
    CHECK(r.markov->gamma == doctest::Approx(0.04).epsilon(1e-6));

    const auto* can = r.find(Curve::canonical);
    REQUIRE(can);
    REQUIRE(can->fit);
    CHECK(std::abs(can->fit->gamma_fit - 0.04) / 0.04 < 0.02);
    CHECK(can->contractive);

    REQUIRE(r.crossing_time_reversed);
    CHECK(r.crossing_time_reversed->verdict == MpembaVerdict::mpemba);
    REQUIRE(r.delay_time_reversed);
    CHECK(*r.delay_time_reversed == doctest::Approx(20.0).epsilon(1e-3));

    const auto* rev = r.find(Curve::time_reversed);
    REQUIRE(rev);
    CHECK_FALSE(rev->contractive);
    CHECK(rev->initial_slope > 0.0);

    for (const auto& cr : r.curves) {
        CHECK(cr.trajectory.max_norm_drift <= 1e-10 * (1.0 + 120.0));
    }
    const auto summary = nlohmann::json::parse(summary_json(r));
    CHECK(summary["guard"]["passed"] == true);
    CHECK(summary["curves"]["dark"]["d_initial"].get<double>() < 1e-2);
}
