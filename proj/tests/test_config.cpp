#include <catch_amalgamated.hpp>

#include <cmath>

#include "sshkit/config.hpp"

using namespace sshkit;

TEST_CASE("parse: comments, blanks and whitespace") {
    const auto c = parse_config("# header\n\n  Cp = 1e-9   # trailing\nf=85\n");
    CHECK(c.number("Cp") == 1e-9);
    CHECK(c.number("f") == 85.0);
    CHECK_FALSE(c.has("Rload"));
}

TEST_CASE("parse: unknown, duplicate and malformed lines are rejected") {
    CHECK_THROWS_AS(parse_config("bogus = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("Cp = 1\nCp = 2\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("Cp 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("Cp =\n"), ValidationError);
}

TEST_CASE("numbers: inf accepted, garbage rejected, missing key named") {
    const auto c = parse_config("Rload = inf\nf = 85Hz\n");
    CHECK(std::isinf(c.number("Rload")));
    CHECK_THROWS_AS(c.number("f"), ValidationError);
    try {
        (void)c.number("Cp");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "Cp");
        CHECK(std::string(e.what()).find("missing required key") != std::string::npos);
    }
}

TEST_CASE("overrides replace file values") {
    auto c = parse_config("Cp = 1e-9\n");
    apply_override(c, "Cp=2e-9");
    apply_override(c, " f = 50 ");
    CHECK(c.number("Cp") == 2e-9);
    CHECK(c.number("f") == 50.0);
    CHECK_THROWS_AS(apply_override(c, "Cp"), ValidationError);
    CHECK_THROWS_AS(apply_override(c, "nope=1"), ValidationError);
}

TEST_CASE("grids") {
    const auto lin = parse_grid("lin:0:1:5");
    REQUIRE(lin.size() == 5);
    CHECK(lin[0] == 0.0);
    CHECK(lin[2] == 0.5);
    CHECK(lin[4] == 1.0);
    const auto lg = parse_grid("log:1e3:1e6:4");
    REQUIRE(lg.size() == 4);
    CHECK(lg.front() == 1e3);
    CHECK(lg.back() == 1e6);
    CHECK(lg[1] == Catch::Approx(1e4).epsilon(1e-12));
    CHECK(parse_grid("1, 2,3") == std::vector<double>{1, 2, 3});
    CHECK(parse_grid("lin:2:2:1") == std::vector<double>{2});
    CHECK_THROWS_AS(parse_grid("log:0:1:3"), ValidationError);
    CHECK_THROWS_AS(parse_grid("lin:0:1"), ValidationError);
    CHECK_THROWS_AS(parse_grid("lin:0:1:0"), ValidationError);
    CHECK_THROWS_AS(parse_grid("1,x"), ValidationError);
}

TEST_CASE("scenario from keys") {
    const auto c = parse_config(
        "Cp = 10e-9\nI0 = 1e-6\nf = 85\nRload = 1e6\nL = 0.4\nQ = 20\nC_add = 1e-6\n"
        "cycles = 50\ntrigger = voltage\n");
    const auto s = scenario_from(c);
    CHECK(s.circuit.Cp() == 10e-9);
    CHECK(s.excitation.amplitude == 1e-6);
    CHECK(s.load.Rload == 1e6);
    CHECK(s.inductor.L == 0.4);
    CHECK(s.inductor.Rs == Catch::Approx(0.4 / std::sqrt(0.4 * 10e-9) / 20).epsilon(1e-12));
    CHECK(s.c_add == 1e-6);
    CHECK(s.sim.cycles == 50);
    CHECK(s.sim.trigger == Trigger::voltage);
}

TEST_CASE("conflicting keys") {
    CHECK_THROWS_AS(inductor_from(parse_config("L = 1\nQ = 5\nRs = 1\n"), 1e-9), ValidationError);
    CHECK_THROWS_AS(circuit_from(parse_config("Cp = 1e-9\ns11 = 1\n")), ValidationError);
    CHECK_THROWS_AS(excitation_from(parse_config("f = 1\nI0 = 1\nF0 = 1\n"),
                                    PiezoEquivalentCircuit::from_capacitance(1e-9)),
                    ValidationError);
    CHECK_THROWS_AS(trigger_from(parse_config("trigger = sometimes\n")), ValidationError);
}

TEST_CASE("sweep keys") {
    const auto c = parse_config("sweep.param = C_add\nsweep.evaluator = ORACLE_SSHI\nsweep.metric = net_power\n");
    CHECK(sweep_param_from(c) == SweepParam::C_add);
    CHECK(evaluator_from(c) == Evaluator::oracle_sshi);
    CHECK(metric_from(c) == SweepMetric::net_power);
    CHECK_THROWS_AS(sweep_param_from(parse_config("sweep.param = Z\n")), ValidationError);
}

TEST_CASE("every key is documented with a unit") {
    const auto help = config_keys_help();
    for (const auto& k : config_keys()) {
        CHECK_FALSE(k.unit.empty());
        CHECK(help.find(std::string(k.key)) != std::string::npos);
    }
}

TEST_CASE("missing file is an I/O error") {
    CHECK_THROWS_AS(load_config_file("/nonexistent/x.cfg"), IoError);
}
