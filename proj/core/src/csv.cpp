#include "alphalab/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "alphalab/error.hpp"

namespace alphalab::csv {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

namespace {
std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}
}  // namespace

// strtod rather than from_chars: libstdc++ 11 lacks floating from_chars.
bool parse_double(std::string_view field, double& out) {
    field = trim(field);
    if (field.empty()) return false;
    std::string buf(field);
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || errno == ERANGE) return false;
    out = v;
    return true;
}

bool parse_int64(std::string_view field, long long& out) {
    field = trim(field);
    if (field.empty()) return false;
    std::string buf(field);
    char* end = nullptr;
    errno = 0;
    long long v = std::strtoll(buf.c_str(), &end, 10);
    if (end != buf.c_str() + buf.size() || errno == ERANGE) {
        // Some exports write integer columns as "123.0".
        double d = 0;
        if (!parse_double(field, d) || d != static_cast<double>(static_cast<long long>(d))) return false;
        v = static_cast<long long>(d);
    }
    out = v;
    return true;
}

std::string format(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PreconditionError("cannot write " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

}  // namespace alphalab::csv
