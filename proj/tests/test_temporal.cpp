#include <catch2/catch_amalgamated.hpp>

#include "oks/temporal.hpp"
#include "oracles.hpp"

using namespace oks;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

KerrMedium bbs(double thickness_mm) {
    return {2.45, 1.6e-18, fs2_per_mm(1057.19), millimeters(thickness_mm)};
}

BeamGeometry row1_geometry() {
    return {nanometers(800.0), micrometers(11.85), micrometers(9.25)};
}

PulseSpec row1_pulse() { return {nanojoules(1.8), femtoseconds(80.0)}; }

double fs_of(Time t) { return t.value() * 1e15; }

} // namespace

TEST_CASE("gate profile", "[temporal]") {
    const PulseSpec pulse{nanojoules(1.0), femtoseconds(80.0), femtoseconds(10.0)};
    const Time tau_eff = femtoseconds(100.0);
    CHECK(gate_profile(femtoseconds(10.0), pulse, tau_eff) == 1.0);
    CHECK_THAT(gate_profile(femtoseconds(10.0 + 50.0), pulse, tau_eff), WithinRel(0.5, 1e-12));
    CHECK_THAT(gate_profile(femtoseconds(10.0 - 50.0), pulse, tau_eff), WithinRel(0.5, 1e-12));
    CHECK(gate_profile(picoseconds(100.0), pulse, tau_eff) == 0.0);
    CHECK_THROWS_AS(gate_profile(Time{0.0}, pulse, Time{0.0}), DomainError);
}

TEST_CASE("effective gate duration", "[temporal]") {
    const auto geom = row1_geometry();
    const auto pulse = row1_pulse();

    // no dispersion, or zero gvd: exactly tau0
    CHECK(effective_gate_duration(bbs(3.0), geom, pulse, false).value() == 80e-15);
    const KerrMedium no_gvd{2.45, 1.6e-18, Gvd{0.0}, millimeters(3.0)};
    CHECK(effective_gate_duration(no_gvd, geom, pulse, true).value() == 80e-15);

    // z-average matches the closed form
    for (double l : {0.1, 1.0, 3.0, 5.0}) {
        const double numeric = effective_gate_duration(bbs(l), geom, pulse, true).value();
        const double closed = oracles::mean_broadened_duration(l * 1e-3, 80e-15,
                                                               1057.19 * 1e-27);
        CHECK_THAT(numeric, WithinRel(closed, 1e-10));
    }
    CHECK_THAT(fs_of(effective_gate_duration(bbs(3.0), geom, pulse, true)),
               WithinAbs(100.660799, 1e-4));
}

TEST_CASE("fwhm extraction", "[temporal]") {
    SECTION("perfect Gaussian samples") {
        std::vector<Time> times;
        std::vector<double> values;
        const double fwhm = 100e-15;
        for (int i = 0; i <= 2000; ++i) {
            const double t = -300e-15 + 600e-15 * i / 2000.0;
            times.push_back(Time{t});
            values.push_back(std::exp(-4.0 * ln2 * t * t / (fwhm * fwhm)));
        }
        CHECK_THAT(fs_of(fwhm_of(times, values)), WithinAbs(100.0, 0.01));
    }

    SECTION("sin^2-of-Gaussian with known half crossings") {
        // T(t) = sin^2(1.2 exp(-4 ln2 t^2 / tau^2)), tau = 100 fs
        std::vector<Time> times;
        std::vector<double> values;
        for (int i = 0; i <= 4000; ++i) {
            const double t = -300e-15 + 600e-15 * i / 4000.0;
            times.push_back(Time{t});
            const double g = std::exp(-4.0 * ln2 * t * t / (100e-15 * 100e-15));
            const double s = std::sin(1.2 * g);
            values.push_back(s * s);
        }
        // closed-form inversion: peak sin^2(1.2), half at g = asin(sqrt(peak/2))/1.2
        CHECK_THAT(fs_of(fwhm_of(times, values)), WithinAbs(85.8984627389934, 1e-3));
    }

    SECTION("degenerate inputs") {
        std::vector<Time> times{Time{0.0}, Time{1e-15}, Time{2e-15}};
        std::vector<double> flat{0.5, 0.5, 0.5};
        CHECK_THROWS_AS(fwhm_of(times, flat), AnalysisError);
        std::vector<double> zero{0.0, 0.0, 0.0};
        CHECK_THROWS_AS(fwhm_of(times, zero), AnalysisError);
        std::vector<double> two{0.1, 0.9};
        CHECK_THROWS_AS(fwhm_of(std::span<const Time>(times.data(), 2), two), AnalysisError);
    }
}

TEST_CASE("temporal response, constant-intensity convention", "[temporal]") {
    const auto medium = bbs(3.0);
    const auto geom = row1_geometry();
    const auto pulse = row1_pulse();
    const auto response =
        temporal_response(medium, geom, pulse, Convention::constant_intensity, true);

    const double eff = gate_efficiency(medium, geom, pulse, true).transmittance;
    CHECK_THAT(response.peak_transmittance, WithinRel(eff, 1e-9));
    REQUIRE(response.fwhm.has_value());
    CHECK_THAT(fs_of(*response.fwhm), WithinAbs(78.010756, 0.01));

    SECTION("symmetric about the pulse center") {
        const std::size_t n = response.times.size();
        for (std::size_t i = 0; i < n / 2; ++i) {
            CHECK_THAT(response.transmittance[i],
                       WithinAbs(response.transmittance[n - 1 - i], 1e-12));
        }
    }

    SECTION("list invariants") {
        REQUIRE(response.times.size() == response.transmittance.size());
        double max_seen = 0.0;
        for (double v : response.transmittance) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            max_seen = std::max(max_seen, v);
        }
        CHECK_THAT(response.peak_transmittance, WithinAbs(max_seen, 1e-12));
    }
}

TEST_CASE("temporal response, z-resolved convention", "[temporal]") {
    const auto medium = bbs(3.0);
    const auto geom = row1_geometry();
    const auto pulse = row1_pulse();
    const auto response = temporal_response(medium, geom, pulse, Convention::z_resolved, true);

    const double eff = gate_efficiency(medium, geom, pulse, true).transmittance;
    CHECK_THAT(response.peak_transmittance, WithinRel(eff, 1e-9));
    REQUIRE(response.fwhm.has_value());
    CHECK_THAT(fs_of(*response.fwhm), WithinAbs(73.974112, 0.05));

    SECTION("conventions coincide for a dispersionless medium") {
        const KerrMedium no_gvd{2.45, 1.6e-18, Gvd{0.0}, millimeters(3.0)};
        const auto a = temporal_response(no_gvd, geom, pulse, Convention::constant_intensity,
                                         true, std::nullopt, 501);
        const auto b = temporal_response(no_gvd, geom, pulse, Convention::z_resolved, true,
                                         std::nullopt, 501);
        for (std::size_t i = 0; i < a.transmittance.size(); ++i)
            CHECK_THAT(a.transmittance[i], WithinAbs(b.transmittance[i], 1e-10));
    }
}

TEST_CASE("quadratic-regime limit of the response width", "[temporal]") {
    // gvd = 0 and peak << 1: T ~ phi^2 g^2, so FWHM -> tau0 / sqrt(2)
    const KerrMedium weak{2.45, 1.6e-18, Gvd{0.0}, millimeters(3.0)};
    const PulseSpec faint{Energy{1.8e-12 * 1e-3}, femtoseconds(80.0)};
    const auto response = temporal_response(weak, row1_geometry(), faint,
                                            Convention::constant_intensity, true);
    REQUIRE(response.fwhm.has_value());
    CHECK_THAT(fs_of(*response.fwhm), WithinRel(80.0 / std::sqrt(2.0), 1e-3));
}

TEST_CASE("thicker crystals respond more slowly", "[temporal]") {
    const auto geom = row1_geometry();
    const auto pulse = row1_pulse();
    double prev = 0.0;
    for (double l : {1.0, 3.0, 5.0}) {
        const auto response = temporal_response(bbs(l), geom, pulse,
                                                Convention::constant_intensity, true);
        REQUIRE(response.fwhm.has_value());
        CHECK(response.fwhm->value() >= prev);
        prev = response.fwhm->value();
    }
}

TEST_CASE("sin^2 sharpening narrows the response below the gate width", "[temporal]") {
    oracles::ParamSampler sample(5);
    for (int i = 0; i < 20; ++i) {
        const KerrMedium medium{2.45, 1.6e-18, fs2_per_mm(sample.uniform(0.0, 1500.0)),
                                millimeters(sample.uniform(0.2, 5.0))};
        const BeamGeometry geom{nanometers(800.0), micrometers(sample.uniform(4.0, 40.0)),
                                micrometers(sample.uniform(4.0, 40.0))};
        const PulseSpec pulse{nanojoules(sample.uniform(0.05, 30.0)),
                              femtoseconds(sample.uniform(40.0, 150.0))};
        const auto response =
            temporal_response(medium, geom, pulse, Convention::constant_intensity, true);
        if (!response.fwhm || response.peak_transmittance >= 1.0) continue;
        const double tau_eff = effective_gate_duration(medium, geom, pulse, true).value();
        CHECK(response.fwhm->value() < tau_eff);

        // and the closed-form width of sin^2(phi g / 2) agrees
        const double predicted =
            oracles::fwhm_sin2_of_gaussian(response.peak_transmittance, tau_eff);
        CHECK_THAT(response.fwhm->value(), WithinRel(predicted, 1e-4));
    }
}

TEST_CASE("closed gate yields an all-zero response", "[temporal]") {
    const PulseSpec dark{Energy{0.0}, femtoseconds(80.0)};
    const auto response = temporal_response(bbs(3.0), row1_geometry(), dark,
                                            Convention::constant_intensity, true);
    CHECK_FALSE(response.fwhm.has_value());
    CHECK(response.peak_transmittance == 0.0);
    for (double v : response.transmittance) CHECK(v == 0.0);
}

TEST_CASE("temporal response input validation", "[temporal]") {
    const auto medium = bbs(3.0);
    const auto geom = row1_geometry();
    const auto pulse = row1_pulse();
    CHECK_THROWS_AS(temporal_response(medium, geom, pulse, Convention::constant_intensity, true,
                                      std::nullopt, 2),
                    DomainError);
    // window not covering the pulse center
    const TimeWindow off_center{femtoseconds(100.0), femtoseconds(500.0)};
    CHECK_THROWS_AS(temporal_response(medium, geom, pulse, Convention::constant_intensity, true,
                                      off_center),
                    DomainError);
}
