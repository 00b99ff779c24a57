#include "viralsim/csv.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace viralsim::io {

namespace {

void append_number(std::string& out, double v) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.append(buf, static_cast<std::size_t>(len));
}

double parse_field(std::string_view field, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw std::runtime_error("csv: bad number on line " +
                                 std::to_string(line_no));
    return v;
}

}  // namespace

std::string write_csv(const campaign::Trajectory& traj) {
    std::string out = "t,S,I,R\n";
    out.reserve(out.size() + traj.times.size() * 80);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        append_number(out, traj.times[k]);
        out.push_back(',');
        append_number(out, traj.s[k]);
        out.push_back(',');
        append_number(out, traj.i[k]);
        out.push_back(',');
        append_number(out, traj.r[k]);
        out.push_back('\n');
    }
    return out;
}

CsvData read_csv(std::string_view text) {
    CsvData data;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            throw std::runtime_error("csv: missing trailing newline");
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!saw_header) {
            if (line != "t,S,I,R")
                throw std::runtime_error("csv: bad header '" +
                                         std::string(line) + "'");
            saw_header = true;
            continue;
        }
        double fields[4];
        std::size_t start = 0;
        for (int f = 0; f < 4; ++f) {
            std::size_t comma = line.find(',', start);
            if (f == 3) {
                if (comma != std::string_view::npos)
                    throw std::runtime_error("csv: too many fields on line " +
                                             std::to_string(line_no));
                comma = line.size();
            } else if (comma == std::string_view::npos) {
                throw std::runtime_error("csv: too few fields on line " +
                                         std::to_string(line_no));
            }
            fields[f] = parse_field(line.substr(start, comma - start), line_no);
            start = comma + 1;
        }
        data.t.push_back(fields[0]);
        data.s.push_back(fields[1]);
        data.i.push_back(fields[2]);
        data.r.push_back(fields[3]);
    }
    if (!saw_header) throw std::runtime_error("csv: empty input");
    return data;
}

}  // namespace viralsim::io
