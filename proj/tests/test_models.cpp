#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "sshkit/models.hpp"

using namespace sshkit;
using Catch::Matchers::WithinRel;

namespace {

// Bimorph layer, 35 x 12.5 x 0.45 mm, PZT-like constants.
PiezoMaterialGeometry bimorph() {
    PiezoMaterialGeometry g;
    g.s11 = 16e-12;
    g.d31 = -180e-12;
    g.eps33 = 1800 * 8.8541878128e-12;
    g.L1 = 35e-3;
    g.L2 = 12.5e-3;
    g.L3 = 0.45e-3;
    g.A1 = 12.5e-3 * 0.45e-3;
    g.A3 = 35e-3 * 12.5e-3;
    return g;
}

}  // namespace

TEST_CASE("derive: unit geometry gives N = d31, Cm = s11, C0 = eps33") {
    PiezoMaterialGeometry g{2.0, 3.0, 5.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    const auto c = derive_equivalent_circuit(g);
    CHECK(c.N == 1.5);
    CHECK(c.Cm == 2.0);
    CHECK(c.C0 == 5.0);
    CHECK(c.C31 == 1.5 * 1.5 * 2.0 + 5.0);
    CHECK(std::isinf(c.Rp));
}

TEST_CASE("derive: bimorph fixture against high-precision reference") {
    // mpmath at 40 digits
    const auto c = derive_equivalent_circuit(bimorph());
    CHECK_THAT(c.N, WithinRel(-0.140625, 1e-14));
    CHECK_THAT(c.Cm, WithinRel(9.9555555555555556e-8, 1e-13));
    CHECK_THAT(c.C0, WithinRel(1.54948286724e-8, 1e-13));
    CHECK_THAT(c.C31, WithinRel(1.74635786724e-8, 1e-13));
    CHECK(c.Cp() == c.C31);
}

TEST_CASE("derive: C31 grows with |N| regardless of poling sign") {
    auto g = bimorph();
    const double cp_neg = derive_equivalent_circuit(g).C31;
    g.d31 = -g.d31;
    const auto pos = derive_equivalent_circuit(g);
    CHECK(pos.N > 0.0);
    CHECK(pos.C31 == cp_neg);
}

TEST_CASE("derive: rejects invalid geometry") {
    auto g = bimorph();
    g.s11 = 0.0;
    CHECK_THROWS_AS(derive_equivalent_circuit(g), ValidationError);
    g = bimorph();
    g.d31 = 0.0;
    CHECK_THROWS_AS(derive_equivalent_circuit(g), ValidationError);
    g = bimorph();
    g.L3 = -1e-3;
    CHECK_THROWS_AS(derive_equivalent_circuit(g), ValidationError);
    g = bimorph();
    g.A1 = std::nan("");
    CHECK_THROWS_AS(derive_equivalent_circuit(g), ValidationError);
    CHECK_THROWS_AS(derive_equivalent_circuit(bimorph(), 0.0), ValidationError);
}

TEST_CASE("validation error names the field") {
    auto g = bimorph();
    g.eps33 = -1.0;
    try {
        g.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "eps33");
    }
}

TEST_CASE("excitation: sinusoid value and period") {
    ExcitationSpec e{Waveform::sinusoidal, 2e-6, 85.0, 0.0};
    CHECK_THAT(e.period(), WithinRel(1.0 / 85.0, 1e-15));
    CHECK(e.at(0.0) == 0.0);
    CHECK_THAT(e.at(0.25 / 85.0), WithinRel(2e-6, 1e-12));
    ExcitationSpec bad{Waveform::sinusoidal, -1.0, 85.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    ExcitationSpec nof{Waveform::sinusoidal, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(nof.validate(), ValidationError);
}

TEST_CASE("excitation: force to current uses |N| Cm omega") {
    const auto c = derive_equivalent_circuit(bimorph());
    const auto e = ExcitationSpec::from_force(c, 0.1, 85.0);
    const double w = 2 * std::numbers::pi * 85.0;
    CHECK_THAT(e.amplitude, WithinRel(0.140625 * 9.9555555555555556e-8 * w * 0.1, 1e-12));
    // I = N Cm dF/dt with F = F0 sin(wt): I = N Cm w F0 cos(wt)
    for (double t : {0.0, 1e-3, 4.2e-3}) {
        const double expect = c.N * c.Cm * w * 0.1 * std::cos(w * t);
        CHECK(std::abs(e.at(t) - expect) < 1e-12 * e.amplitude);
    }
}

TEST_CASE("inductor Q and series resistance round-trip") {
    const double w0 = 51017.836433451301;  // 1/sqrt(22 mH * C31 of the bimorph)
    const double rs = series_resistance_for_q(22e-3, w0, 10.0);
    CHECK_THAT(rs, WithinRel(112.23924015359286, 1e-12));
    CHECK_THAT(inductor_quality_factor({22e-3, rs}, w0), WithinRel(10.0, 1e-14));
    CHECK(std::isinf(inductor_quality_factor({22e-3, 0.0}, w0)));
    CHECK(series_resistance_for_q(22e-3, w0, kInf) == 0.0);
    CHECK_THROWS_AS(series_resistance_for_q(22e-3, w0, 0.0), ValidationError);
    CHECK_THROWS_AS(inductor_quality_factor({22e-3, -1.0}, w0), ValidationError);
}

TEST_CASE("load: open circuit has zero conductance") {
    CHECK(Load{}.conductance() == 0.0);
    CHECK(Load{2e3}.conductance() == 0.5e-3);
    CHECK_THROWS_AS(Load{0.0}.validate(), ValidationError);
}

TEST_CASE("EM dual mapping swaps C/L and R/G") {
    const auto piezo = PiezoEquivalentCircuit::from_capacitance(10e-9, 1e7);
    const ExcitationSpec e{Waveform::sinusoidal, 1e-6, 85.0, 0.0};
    const auto m = em_dual_of(piezo, e, Load{1e6}, IntegratedInductor{22e-3, 40.0});
    CHECK(m.em.Vamp == 1e-6);
    CHECK(m.em.f == 85.0);
    CHECK(m.em.Lm == 10e-9);
    CHECK(m.em.Rm == 1e-7);
    CHECK(m.load.R == 1e-6);
    CHECK(m.capacitor.C == 22e-3);
    CHECK(m.capacitor.Rpar == 1.0 / 40.0);

    const auto ideal = em_dual_of(PiezoEquivalentCircuit::from_capacitance(10e-9), e, Load{},
                                  IntegratedInductor{22e-3, 0.0});
    CHECK(ideal.em.Rm == 0.0);
    CHECK(ideal.load.R == 0.0);
    CHECK(std::isinf(ideal.capacitor.Rpar));
}
