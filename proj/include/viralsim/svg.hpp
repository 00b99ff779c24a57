// Standalone SVG 1.1 line charts (svg/g/polyline/line/text/rect only),
// deterministic byte-for-byte for identical input.
#ifndef VIRALSIM_SVG_HPP
#define VIRALSIM_SVG_HPP

#include <string>
#include <vector>

namespace viralsim::io {

struct Series {
    std::string label;
    std::vector<double> times;
    std::vector<double> values;
};

// One polyline per series on shared linear axes with tick labels and a
// legend. Series take the fixed palette in order (S blue, I red, R green);
// all series must share the same times vector and all values be finite.
std::string write_svg_chart(const std::vector<Series>& series,
                            const std::string& title);

}  // namespace viralsim::io

#endif
