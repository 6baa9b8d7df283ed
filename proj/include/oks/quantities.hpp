#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "oks/errors.hpp"

// Unit-safe scalar types. All computation happens in SI base units; the
// familiar lab units (um, fs, nJ, fs^2/mm, ...) exist only at the config and
// output boundary, converted through the tag table below.

namespace oks {

namespace detail {

template <class Tag>
struct Quantity {
    double si = 0.0;

    constexpr Quantity() = default;
    constexpr explicit Quantity(double si_value) : si(si_value) {}

    constexpr double value() const { return si; }

    friend constexpr bool operator==(Quantity a, Quantity b) { return a.si == b.si; }
    friend constexpr auto operator<=>(Quantity a, Quantity b) { return a.si <=> b.si; }
    friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity{a.si + b.si}; }
    friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity{a.si - b.si}; }
    friend constexpr Quantity operator*(double s, Quantity q) { return Quantity{s * q.si}; }
    friend constexpr Quantity operator*(Quantity q, double s) { return Quantity{s * q.si}; }
    friend constexpr Quantity operator/(Quantity q, double s) { return Quantity{q.si / s}; }
    friend constexpr double operator/(Quantity a, Quantity b) { return a.si / b.si; }
};

} // namespace detail

struct LengthTag {};
struct TimeTag {};
struct EnergyTag {};
struct PowerTag {};
struct IntensityTag {};
struct AngleTag {};
struct GvdTag {};
struct FrequencyTag {};

using Length = detail::Quantity<LengthTag>;       // m
using Time = detail::Quantity<TimeTag>;           // s
using Energy = detail::Quantity<EnergyTag>;       // J
using Power = detail::Quantity<PowerTag>;         // W
using Intensity = detail::Quantity<IntensityTag>; // W/m^2
using Angle = detail::Quantity<AngleTag>;         // rad
using Gvd = detail::Quantity<GvdTag>;             // s^2/m
using Frequency = detail::Quantity<FrequencyTag>; // Hz

constexpr Length meters(double v) { return Length{v}; }
constexpr Length millimeters(double v) { return Length{v * 1e-3}; }
constexpr Length micrometers(double v) { return Length{v * 1e-6}; }
constexpr Length nanometers(double v) { return Length{v * 1e-9}; }
constexpr Time seconds(double v) { return Time{v}; }
constexpr Time picoseconds(double v) { return Time{v * 1e-12}; }
constexpr Time femtoseconds(double v) { return Time{v * 1e-15}; }
constexpr Energy joules(double v) { return Energy{v}; }
constexpr Energy nanojoules(double v) { return Energy{v * 1e-9}; }
constexpr Power watts(double v) { return Power{v}; }
constexpr Angle radians(double v) { return Angle{v}; }
inline Angle degrees(double v) { return Angle{v * std::numbers::pi / 180.0}; }
constexpr Gvd fs2_per_mm(double v) { return Gvd{v * 1e-27}; } // (1e-15)^2 / 1e-3
constexpr Frequency hertz(double v) { return Frequency{v}; }
constexpr Frequency megahertz(double v) { return Frequency{v * 1e6}; }
constexpr Frequency gigahertz(double v) { return Frequency{v * 1e9}; }

/// What a unit tag measures; used to validate that a config value carries a
/// unit of the expected kind.
enum class Dimension {
    length,
    time,
    energy,
    power,
    intensity,
    angle,
    gvd,
    frequency,
    nonlinear_index, // m^2/W
};

struct UnitDef {
    std::string_view tag;
    Dimension dim;
    double to_si; // multiply a value in this unit to obtain SI
};

// Tag table. UTF-8 and ASCII spellings are both accepted on input; the first
// entry per unit is the canonical spelling used on output.
inline constexpr std::array<UnitDef, 27> unit_table{{
    {"m", Dimension::length, 1.0},
    {"mm", Dimension::length, 1e-3},
    {"µm", Dimension::length, 1e-6}, // µm
    {"um", Dimension::length, 1e-6},
    {"nm", Dimension::length, 1e-9},
    {"s", Dimension::time, 1.0},
    {"ps", Dimension::time, 1e-12},
    {"fs", Dimension::time, 1e-15},
    {"J", Dimension::energy, 1.0},
    {"nJ", Dimension::energy, 1e-9},
    {"W", Dimension::power, 1.0},
    {"W/m^2", Dimension::intensity, 1.0},
    {"rad", Dimension::angle, 1.0},
    {"degree", Dimension::angle, std::numbers::pi / 180.0},
    {"deg", Dimension::angle, std::numbers::pi / 180.0},
    {"fs^2/mm", Dimension::gvd, 1e-27},
    {"fs²/mm", Dimension::gvd, 1e-27}, // fs²/mm
    {"s^2/m", Dimension::gvd, 1.0},
    {"s²/m", Dimension::gvd, 1.0},
    {"Hz", Dimension::frequency, 1.0},
    {"MHz", Dimension::frequency, 1e6},
    {"GHz", Dimension::frequency, 1e9},
    {"m^2/W", Dimension::nonlinear_index, 1.0},
    {"m²/W", Dimension::nonlinear_index, 1.0},
    {"cm^2/W", Dimension::nonlinear_index, 1e-4},
    {"mrad", Dimension::angle, 1e-3},
    {"cm", Dimension::length, 1e-2},
}};

inline const UnitDef& find_unit(std::string_view tag) {
    for (const auto& u : unit_table) {
        if (u.tag == tag) return u;
    }
    throw ConfigError("unknown unit tag '" + std::string(tag) + "'");
}

/// Paper-unit value -> SI. Throws ConfigError for an unknown tag.
inline double convert_to_si(double value, std::string_view unit_tag) {
    return value * find_unit(unit_tag).to_si;
}

/// SI -> paper-unit value (inverse of convert_to_si for the same tag).
inline double convert_from_si(double si_value, std::string_view unit_tag) {
    return si_value / find_unit(unit_tag).to_si;
}

/// E = P / f for a pulsed source quoted as average power at a repetition rate.
inline Energy pulse_energy_from_power(Power avg_power, Frequency rep_rate) {
    if (!(rep_rate.value() > 0.0))
        throw DomainError("repetition rate must be positive");
    return Energy{avg_power.value() / rep_rate.value()};
}

} // namespace oks
