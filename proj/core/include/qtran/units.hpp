#pragma once

// Energies are in eV, times in fs, currents reported in microampere.

namespace qtran::units {

/// Reduced Planck constant in eV*fs.
inline constexpr double kHbar = 0.658211951;

namespace codata {
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kHbarSI = 1.054571817e-34;            // J*s
}  // namespace codata

/// e * (1 eV) / hbar expressed in microampere: the current carried by a
/// rate of one electron per (hbar / eV).
inline constexpr double kCurrentUnitMicroAmp =
    codata::kElementaryCharge * codata::kElementaryCharge / codata::kHbarSI * 1e6;

/// Converts a time in fs to the natural unit hbar/eV.
constexpr double to_natural_time(double t_fs) { return t_fs / kHbar; }

/// Converts a current in units of e*eV/hbar to microampere.
constexpr double to_micro_amp(double j_natural) { return j_natural * kCurrentUnitMicroAmp; }

}  // namespace qtran::units
