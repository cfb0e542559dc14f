#include "besselpot/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "besselpot/errors.hpp"

namespace besselpot {

namespace {

constexpr const char* kMagic = "# besselpot grid function v1";

double parse_number(const std::string& text, const std::string& field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw SchemaError("trailing characters in " + field + ": '" + text + "'");
        return v;
    } catch (const std::logic_error&) {
        throw SchemaError("cannot parse " + field + ": '" + text + "'");
    }
}

int parse_int(const std::string& text, const std::string& field) {
    const double v = parse_number(text, field);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw SchemaError(field + " must be an integer");
    return static_cast<int>(v);
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_grid_function(std::ostream& out, const GridFunction& f, std::optional<double> alpha,
                         std::optional<double> beta) {
    const GridSpec& s = f.spec();
    out << kMagic << '\n'
        << "dim " << s.dim << '\n'
        << "half_width " << format_double(s.half_width) << '\n'
        << "points_per_dim " << s.points_per_dim << '\n';
    if (alpha) out << "alpha " << format_double(*alpha) << '\n';
    if (beta) out << "beta " << format_double(*beta) << '\n';
    out << "values " << f.size() << '\n';
    for (double v : f.values()) out << format_double(v) << '\n';
}

StoredFunction read_grid_function(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kMagic) throw SchemaError("missing grid function header line");

    std::optional<int> dim, points;
    std::optional<double> half_width, alpha, beta;
    std::optional<std::size_t> count;
    while (!count && std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string key, value, extra;
        fields >> key >> value;
        if (value.empty() || (fields >> extra)) throw SchemaError("malformed header line: '" + line + "'");
        if (key == "dim")
            dim = parse_int(value, key);
        else if (key == "half_width")
            half_width = parse_number(value, key);
        else if (key == "points_per_dim")
            points = parse_int(value, key);
        else if (key == "alpha")
            alpha = parse_number(value, key);
        else if (key == "beta")
            beta = parse_number(value, key);
        else if (key == "values") {
            const int n = parse_int(value, key);
            if (n < 0) throw SchemaError("negative value count");
            count = static_cast<std::size_t>(n);
        } else {
            throw SchemaError("unknown header field '" + key + "'");
        }
    }
    if (!dim || !half_width || !points || !count)
        throw SchemaError("header needs dim, half_width, points_per_dim and values");

    GridSpec spec{*dim, *half_width, *points};
    try {
        spec.validate();
    } catch (const Error& e) {
        throw SchemaError(std::string("invalid grid in header: ") + e.what());
    }
    if (*count != spec.size()) throw SchemaError("value count does not match the grid");

    std::vector<double> values;
    values.reserve(*count);
    while (values.size() < *count && std::getline(in, line)) {
        if (line.empty()) continue;
        values.push_back(parse_number(line, "value"));
    }
    if (values.size() != *count) throw SchemaError("file ends before all values were read");
    while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos) throw SchemaError("unexpected data after values");
    try {
        return {GridFunction(spec, std::move(values)), alpha, beta};
    } catch (const DomainError& e) {
        throw SchemaError(e.what());
    }
}

void save_grid_function(const std::filesystem::path& path, const GridFunction& f, std::optional<double> alpha,
                        std::optional<double> beta) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    write_grid_function(out, f, alpha, beta);
    if (!out) throw ConfigError("write failed for " + path.string());
}

StoredFunction load_grid_function(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    return read_grid_function(in);
}

void write_trace_csv(std::ostream& out, const SolverTrace& trace) {
    out << "iter,sup,lambda,delta,residual\n";
    for (const SolverRecord& r : trace.records)
        out << r.iter << ',' << format_double(r.sup) << ',' << format_double(r.lambda) << ',' << format_double(r.delta)
            << ',' << format_double(r.residual) << '\n';
}

}  // namespace besselpot
