#pragma once

#include "wabc/mesh.hpp"

namespace wabc {

/// Channel: bottom at y = 0, top on the line y = length + (x - width/2) tan(tilt),
/// columns x_i = i width/nx. Nodes sit on lattice rows y = j hy (hy = length/ny)
/// up to half a row below the top, plus one node on the top line; neighbouring
/// columns are zipped along the shorter diagonal. `extra_rows` continues the
/// lattice above the top line up to top + extra_rows hy and triangulates it
/// separately, so the plain channel is an exact subset of an extended one.
struct ChannelSpec {
    double width = 0.02;
    double length = 0.03;  // measured at the middle column
    double tilt_deg = 0.0;
    double h = 2.5e-4;
    int extra_rows = 0;
    BoundaryTag bottom = BoundaryTag::Excitation;
    BoundaryTag top = BoundaryTag::Absorbing;
    BoundaryTag sides = BoundaryTag::Neumann;
};

Mesh generate_channel(const ChannelSpec& spec);

/// Convenience overload: plain channel with the default tags.
Mesh generate_channel(double width, double length, double tilt_deg, double h);

/// Extra rows needed so that every column of the channel grows by at least
/// `extension` meters.
int channel_rows_for_extension(const ChannelSpec& spec, double extension);

/// Structured square lattice over [x0 - pad*dx, x0 + side + pad*dx]^2 (likewise
/// in y) with dx = side / cells. Node coordinates are computed as integer
/// multiples of dx from (x0, y0), so the unpadded square is an exact subset
/// of any padded one.
struct SquareSpec {
    double x0 = 0.0;
    double y0 = 0.0;
    double side = 0.03;
    int cells = 120;
    int pad = 0;
    BoundaryTag boundary = BoundaryTag::Absorbing;
};

Mesh generate_square(const SquareSpec& spec);

/// Octant of a square plate (side a) with a centered circular hole (radius r):
/// {0 <= x <= y <= a/2, x^2 + y^2 >= r^2}. Nodes sit on straight rays from the
/// hole to evenly spaced points of the top edge y = a/2; each ray is split
/// into `radial` equal steps, and `extra_steps` further steps of the same size
/// continue beyond the top edge (reference domain). Tags: hole excitation,
/// top edge absorbing (Neumann when extended), symmetry lines Neumann.
struct PlateSpec {
    double a = 0.08;
    double r = 0.01;
    int rays = 100;
    int radial = 130;
    int extra_steps = 0;
};

Mesh generate_plate_octant(const PlateSpec& spec);

}  // namespace wabc
