#include "cavlab/csv.hpp"

#include "cavlab/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace cavlab {

namespace {

constexpr std::string_view kErrorPrefix = "error:";

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

void write_row(std::ostream& out, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << format_double(values[i]);
    }
    out << '\n';
}

void write_header(std::ostream& out, const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out << ',';
        out << cols[i];
    }
    out << '\n';
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
        throw Error(Errc::Io, "malformed number '" + std::string(text) + "'");
    }
    return v;
}

const std::vector<std::string>& trajectory_columns() {
    static const std::vector<std::string> cols{
        "t", "Jt", "re_a", "im_a", "re_b", "im_b", "re_c", "im_c", "n_a", "n_b", "n_c",
        "re_coh_ab", "im_coh_ab", "re_coh_ac", "im_coh_ac", "re_coh_cb", "im_coh_cb", "eta_ac"};
    return cols;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    write_header(out, trajectory_columns());
    std::vector<double> row;
    for (const auto& s : traj.samples) {
        row.clear();
        row.push_back(s.t);
        row.push_back(s.jt);
        for (double v : s.state.pack()) row.push_back(v);
        row.push_back(s.eta_ac);
        write_row(out, row);
    }
}

const std::vector<std::string>& spectrum_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c{"delta", "t_forward", "t_backward"};
        const char* modes = "abc";
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const std::string tag = std::string("S_") + modes[i] + modes[j];
                c.push_back("re_" + tag);
                c.push_back("im_" + tag);
            }
        }
        return c;
    }();
    return cols;
}

void write_spectrum_csv(std::ostream& out, const std::vector<ScatteringResult>& spectrum) {
    write_header(out, spectrum_columns());
    std::vector<double> row;
    for (const auto& r : spectrum) {
        row = {r.probe_detuning, r.t_forward, r.t_backward};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                row.push_back(r.s_matrix(i, j).real());
                row.push_back(r.s_matrix(i, j).imag());
            }
        }
        write_row(out, row);
    }
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
    for (const auto& [k, v] : table.metadata) out << "# " << k << ": " << v << '\n';
    out << "# shape: ";
    for (std::size_t i = 0; i < table.shape.size(); ++i) out << (i ? "x" : "") << table.shape[i];
    out << '\n';
    write_header(out, table.columns);
    for (const auto& row : table.rows) {
        for (double c : row.coords) out << format_double(c) << ',';
        if (row.value.ok()) out << format_double(row.value.value);
        else out << kErrorPrefix << row.value.error;
        out << '\n';
    }
}

SweepTable read_sweep_csv(std::istream& in) {
    SweepTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.starts_with("# ")) {
            if (have_header) throw Error(Errc::Io, "metadata after the header row");
            const auto sep = line.find(": ", 2);
            if (sep == std::string::npos) throw Error(Errc::Io, "malformed metadata line '" + line + "'");
            std::string key = line.substr(2, sep - 2);
            std::string value = line.substr(sep + 2);
            if (key == "shape") {
                for (auto part : split(value, 'x')) {
                    const double n = parse_double(part);
                    if (!(n >= 0.0) || n != std::floor(n)) throw Error(Errc::Io, "malformed shape '" + value + "'");
                    table.shape.push_back(static_cast<std::size_t>(n));
                }
            } else {
                table.metadata.emplace_back(std::move(key), std::move(value));
            }
            continue;
        }
        const auto fields = split(line, ',');
        if (!have_header) {
            for (auto f : fields) table.columns.emplace_back(f);
            have_header = true;
            continue;
        }
        if (fields.size() != table.columns.size()) {
            throw Error(Errc::Io, "row has " + std::to_string(fields.size()) + " fields, header has "
                                      + std::to_string(table.columns.size()));
        }
        SweepRow row;
        for (std::size_t i = 0; i + 1 < fields.size(); ++i) row.coords.push_back(parse_double(fields[i]));
        const auto last = fields.back();
        if (last.starts_with(kErrorPrefix)) row.value.error = std::string(last.substr(kErrorPrefix.size()));
        else row.value.value = parse_double(last);
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw Error(Errc::Io, "sweep CSV has no header row");
    return table;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::Io, "cannot open '" + path.string() + "' for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f) throw Error(Errc::Io, "failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace cavlab
