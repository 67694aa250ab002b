#pragma once

#include <iosfwd>

#include "sle/diffusion.hpp"
#include "sle/fractal.hpp"
#include "sle/loewner.hpp"

namespace sle::io {

/// `t,re,im`, one row per trace sample, 17 significant digits.
void write_trace_csv(std::ostream& out, const TracePath& trace);

/// `s,prob,stderr`.
void write_survival_csv(std::ostream& out, const SurvivalEstimate& est);

/// `eps,count`.
void write_box_count_csv(std::ostream& out, const BoxCountTable& table);

/// Trace as an SVG polyline, flipped so that the half-plane points up.
void write_trace_svg(std::ostream& out, const TracePath& trace, double pixels = 800.0);

}  // namespace sle::io
