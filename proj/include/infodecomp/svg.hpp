#ifndef INFODECOMP_SVG_HPP
#define INFODECOMP_SVG_HPP

#include <string>

namespace infodecomp {

// Renders a report file into a static SVG: grouped unique/redundant/
// synergistic bars per feature (with +-2 SD whiskers for aggregate reports
// and overlay lines when oracle values are embedded), plus the two selection
// heatmaps when aggregate selection frequencies are present. Consumes only
// the report text; clip_zero floors bar heights at zero for display without
// touching whiskers or overlays.
std::string render_report_svg(const std::string& report_json_text, bool clip_zero = false);

}  // namespace infodecomp

#endif  // INFODECOMP_SVG_HPP
