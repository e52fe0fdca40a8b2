#include "donn/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace donn {

std::string fmt_shortest(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string fmt_sci9(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::scientific, 8);
    return std::string(buf, res.ptr);
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw std::runtime_error("cannot create directory " + path + ": " + ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for read: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_trace_csv(const Trace& trace, const std::string& path) {
    std::string out;
    out += "time";
    for (const auto& name : trace.node_names) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t i = 0; i < trace.n_samples(); ++i) {
        out += fmt_sci9(trace.times[i]);
        for (const auto& ch : trace.voltages) {
            out += ',';
            out += fmt_sci9(ch[i]);
        }
        out += '\n';
    }
    write_text_file(path, out);
}

void write_matrix_csv(const std::vector<double>& values, int n, const std::string& path) {
    if (n <= 0 || values.size() % static_cast<std::size_t>(n) != 0) {
        throw std::invalid_argument("write_matrix_csv: bad shape");
    }
    std::string out;
    const std::size_t rows = values.size() / static_cast<std::size_t>(n);
    for (std::size_t r = 0; r < rows; ++r) {
        for (int c = 0; c < n; ++c) {
            if (c) out += ',';
            out += fmt_shortest(values[r * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)]);
        }
        out += '\n';
    }
    write_text_file(path, out);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

}  // namespace donn
