// Command-line front end for the optical Kerr shutter model: phase shift,
// gate efficiency, diameter sweeps, temporal response and focusing
// optimization, driven by scenario config files.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "oks/optimize.hpp"
#include "oks/scenario_io.hpp"

namespace {

struct Range {
    double lo_si = 0.0;
    double hi_si = 0.0;
    std::size_t count = 0;
};

// "start:stop:count" with units on start/stop ("0:5mm:51" inherits the unit
// from the other endpoint); endpoints inclusive.
Range parse_range(const std::string& text, oks::Dimension dim, const std::string& flag) {
    const auto bad = [&](const std::string& why) {
        return oks::ConfigError(flag + ": " + why + " (expected start:stop:count, e.g. 5um:60um:64)");
    };
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw bad("malformed range");
    std::string a = text.substr(0, c1);
    std::string b = text.substr(c1 + 1, c2 - c1 - 1);
    const std::string n = text.substr(c2 + 1);

    const auto split_unit = [](const std::string& s) -> std::pair<std::string, std::string> {
        std::size_t i = s.size();
        while (i > 0 && !(std::isdigit(static_cast<unsigned char>(s[i - 1])) || s[i - 1] == '.'))
            --i;
        return {s.substr(0, i), s.substr(i)};
    };
    auto [anum, aunit] = split_unit(a);
    auto [bnum, bunit] = split_unit(b);
    if (aunit.empty() && bunit.empty()) throw bad("endpoints need a unit");
    if (aunit.empty()) aunit = bunit;
    if (bunit.empty()) bunit = aunit;

    Range r;
    r.lo_si = oks::detail::parse_quantity(anum + " " + aunit, dim, flag);
    r.hi_si = oks::detail::parse_quantity(bnum + " " + bunit, dim, flag);
    try {
        const long count = std::stol(n);
        if (count < 1) throw bad("count must be >= 1");
        r.count = static_cast<std::size_t>(count);
    } catch (const std::exception&) {
        throw bad("count must be an integer");
    }
    if (r.count > 1 && !(r.hi_si > r.lo_si)) throw bad("stop must exceed start");
    return r;
}

std::vector<double> linspace(const Range& r) {
    std::vector<double> v(r.count);
    for (std::size_t i = 0; i < r.count; ++i)
        v[i] = r.count == 1 ? r.lo_si
                            : r.lo_si + (r.hi_si - r.lo_si) * static_cast<double>(i) /
                                            static_cast<double>(r.count - 1);
    return v;
}

unsigned default_threads() {
    if (const char* env = std::getenv("OKS_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void write_or_print(const std::optional<std::string>& path, const auto& writer) {
    if (path) {
        std::ofstream out(*path);
        if (!out) throw oks::ConfigError("cannot open output file '" + *path + "'");
        writer(out);
    } else {
        writer(std::cout);
    }
}

std::string fmt(double v) { return oks::detail::format_double(v); }

// thickness sweep for the phase subcommand; L = 0 rows take the limit value 0
void run_phase_sweep(const oks::Scenario& s, const Range& range, std::ostream& out) {
    out << "# label = " << s.label << "\n";
    out << "thickness_mm,phase_rad_no_dispersion,phase_rad_with_dispersion\n";
    for (const double l_si : linspace(range)) {
        double no_disp = 0.0, with_disp = 0.0;
        if (l_si > 0.0) {
            const oks::KerrMedium medium{s.medium.n, s.medium.n2, s.medium.gvd,
                                         oks::Length{l_si}};
            no_disp = oks::phase_on_axis_numeric(medium, s.geometry, s.pulse, false).delta_phi;
            with_disp = oks::phase_on_axis_numeric(medium, s.geometry, s.pulse, true).delta_phi;
        }
        out << fmt(oks::convert_from_si(l_si, "mm")) << ',' << fmt(no_disp) << ','
            << fmt(with_disp) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optical Kerr shutter gate calculator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::vector<std::string> overrides;
    std::optional<std::string> output_path;

    const auto add_common = [&](CLI::App* cmd, bool needs_scenario = true) {
        if (needs_scenario)
            cmd->add_option("scenario", scenario_path, "Scenario config file")
                ->required()
                ->check(CLI::ExistingFile);
        cmd->add_option("--set", overrides,
                        "Override a scenario key, e.g. --set 'pulse.duration=60 fs'");
        cmd->add_option("-o,--output", output_path, "Output file (default: stdout)");
    };

    auto* phase = app.add_subcommand("phase", "On-axis nonlinear phase shift");
    std::optional<std::string> sweep_spec;
    add_common(phase);
    phase->add_option("--sweep-thickness", sweep_spec,
                      "Sweep crystal thickness, start:stop:count (units on start/stop)");

    auto* efficiency = app.add_subcommand("efficiency", "Probe-averaged gate efficiency");
    add_common(efficiency);

    auto* map = app.add_subcommand("map", "Efficiency map over pump/probe beam diameters");
    std::string pump_range = "5um:60um:64";
    std::string probe_range = "5um:60um:64";
    unsigned threads = default_threads();
    add_common(map);
    map->add_option("--pump", pump_range, "Pump diameter axis, start:stop:count")
        ->capture_default_str();
    map->add_option("--probe", probe_range, "Probe diameter axis, start:stop:count")
        ->capture_default_str();
    map->add_option("--threads", threads, "Worker thread bound (default: OKS_THREADS or all cores)");

    auto* temporal = app.add_subcommand("temporal", "Time-dependent gate transmittance");
    std::string convention = "constant-intensity";
    std::size_t samples = 2001;
    std::optional<std::string> half_window;
    add_common(temporal);
    temporal->add_option("--convention", convention, "constant-intensity or z-resolved")
        ->check(CLI::IsMember({"constant-intensity", "z-resolved"}))
        ->capture_default_str();
    temporal->add_option("--samples", samples, "Number of time samples")->capture_default_str();
    temporal->add_option("--window", half_window,
                         "Half-width of the time window around the pulse center, e.g. '500 fs'");

    auto* optimize = app.add_subcommand("optimize", "Efficiency-maximizing beam diameters");
    std::string pump_bounds = "5um:60um";
    std::string probe_bounds = "5um:60um";
    add_common(optimize);
    optimize->add_option("--pump-bounds", pump_bounds, "Pump diameter bounds, lo:hi")
        ->capture_default_str();
    optimize->add_option("--probe-bounds", probe_bounds, "Probe diameter bounds, lo:hi")
        ->capture_default_str();

    auto* table1 = app.add_subcommand("table1", "Benchmark-table reproduction");
    add_common(table1, /*needs_scenario=*/false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (table1->parsed()) {
            const auto rows = oks::reproduce_table1();
            write_or_print(output_path, [&](std::ostream& out) {
                oks::write_csv(out, std::span<const oks::Table1Row>{rows});
            });
            return 0;
        }

        const oks::Scenario scenario = oks::load_scenario(scenario_path, overrides);

        if (phase->parsed()) {
            if (sweep_spec) {
                const Range range = parse_range(*sweep_spec, oks::Dimension::length,
                                                "--sweep-thickness");
                write_or_print(output_path,
                               [&](std::ostream& out) { run_phase_sweep(scenario, range, out); });
            } else {
                const auto no_disp =
                    oks::phase_on_axis_numeric(scenario.medium, scenario.geometry, scenario.pulse,
                                               false);
                const auto with_disp =
                    oks::phase_on_axis_numeric(scenario.medium, scenario.geometry, scenario.pulse,
                                               true);
                write_or_print(output_path, [&](std::ostream& out) {
                    out << "phase_rad_no_dispersion = " << fmt(no_disp.delta_phi) << "\n";
                    out << "phase_rad_with_dispersion = " << fmt(with_disp.delta_phi) << "\n";
                });
            }
        } else if (efficiency->parsed()) {
            const auto result = oks::gate_efficiency(scenario.medium, scenario.geometry,
                                                     scenario.pulse, scenario.dispersion);
            write_or_print(output_path, [&](std::ostream& out) {
                out << fmt(result.transmittance) << "\n";
            });
        } else if (map->parsed()) {
            const Range pr = parse_range(pump_range, oks::Dimension::length, "--pump");
            const Range qr = parse_range(probe_range, oks::Dimension::length, "--probe");
            std::vector<oks::Length> pump_axis, probe_axis;
            for (double v : linspace(pr)) pump_axis.push_back(oks::Length{v});
            for (double v : linspace(qr)) probe_axis.push_back(oks::Length{v});
            const auto grid = oks::efficiency_map(
                scenario.medium, scenario.pulse, scenario.geometry.wavelength,
                scenario.geometry.crossing_angle, std::move(pump_axis), std::move(probe_axis),
                scenario.dispersion, threads);
            write_or_print(output_path, [&](std::ostream& out) {
                oks::write_csv(out, grid, &scenario);
            });
            if (grid.failed_cells > 0)
                std::cerr << "warning: " << grid.failed_cells
                          << " map cells failed to converge (marked nan)\n";
        } else if (temporal->parsed()) {
            std::optional<oks::TimeWindow> window;
            if (half_window) {
                const double hw = oks::detail::parse_quantity(*half_window, oks::Dimension::time,
                                                              "--window");
                const double t0 = scenario.pulse.center.value();
                window = oks::TimeWindow{oks::Time{t0 - hw}, oks::Time{t0 + hw}};
            }
            const auto conv = convention == "z-resolved" ? oks::Convention::z_resolved
                                                         : oks::Convention::constant_intensity;
            const auto response =
                oks::temporal_response(scenario.medium, scenario.geometry, scenario.pulse, conv,
                                       scenario.dispersion, window, samples);
            write_or_print(output_path, [&](std::ostream& out) {
                oks::write_csv(out, response, &scenario);
            });
        } else if (optimize->parsed()) {
            const auto parse_bounds = [](const std::string& text, const std::string& flag) {
                const Range r = parse_range(text + ":2", oks::Dimension::length, flag);
                return oks::DiameterBounds{oks::Length{r.lo_si}, oks::Length{r.hi_si}};
            };
            const auto best = oks::optimal_waists(
                scenario.medium, scenario.pulse, scenario.geometry.wavelength,
                scenario.geometry.crossing_angle, parse_bounds(pump_bounds, "--pump-bounds"),
                parse_bounds(probe_bounds, "--probe-bounds"), scenario.dispersion);
            write_or_print(output_path, [&](std::ostream& out) {
                out << "pump_diameter_um = "
                    << fmt(oks::convert_from_si(best.pump_diameter.value(), "um")) << "\n";
                out << "probe_diameter_um = "
                    << fmt(oks::convert_from_si(best.probe_diameter.value(), "um")) << "\n";
                out << "efficiency = " << fmt(best.best.transmittance) << "\n";
            });
        }
    } catch (const oks::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const oks::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const oks::NumericalError& e) {
        std::cerr << "numerical error: " << e.what()
                  << " (partial estimate " << fmt(e.partial_value) << ")\n";
        return 2;
    } catch (const oks::AnalysisError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
