#pragma once

#include <array>
#include <string>

#include "chemfront/grid.hpp"

namespace chemfront {

enum class InitialDataKind { CompactBump, FrontLike, TwoSided, Custom };

std::string to_string(InitialDataKind k);
InitialDataKind initial_kind_from_string(const std::string& s);

/// Shape parameters of the initial-data library.
///   CompactBump:  u0 = amplitude * max(0, 1 - (|x|/radius)^2)^2
///   FrontLike:    u0 = amplitude * S((x.xi - interface)/width)
///   TwoSided:     u0 = amplitude * S((x.xi - radius)/width) * S((-x.xi - radius)/width)
/// with S a C^2 polynomial cutoff, 1 below -1 and 0 above +1 (compact
/// support is exact on the grid). v0 is built from the same shape with its
/// own amplitude. Custom reads both fields from snapshot files.
struct InitialDataSpec {
    InitialDataKind kind = InitialDataKind::CompactBump;
    double amplitude = 1.0;
    double v_amplitude = 0.5;
    double radius = 10.0;      // bump radius / slab half-width
    double interface_pos = 0.0;
    double width = 2.0;
    std::array<double, 3> direction{1.0, 0.0, 0.0};
    std::string u_file;
    std::string v_file;
};

/// C^2 cutoff: 1 for s <= -1, 0 for s >= 1, quintic in between.
double smooth_cutoff(double s);

/// Build the initial state; throws std::invalid_argument when the decaying
/// support would start inside the clearance margin.
State build_initial(const InitialDataSpec& spec, const Grid& grid,
                    double clearance_fraction = 0.1);

// Class membership predicates evaluated on the grid.
bool is_compactly_supported(const Field& f, double clearance_fraction = 0.1);
bool is_front_like(const Field& f, const std::array<double, 3>& xi,
                   double clearance_fraction = 0.1);
bool is_two_sided(const Field& f, const std::array<double, 3>& xi,
                  double clearance_fraction = 0.1);

}  // namespace chemfront
