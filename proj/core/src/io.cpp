#include "momenta/io.hpp"

#include <fstream>
#include <sstream>

#include "momenta/expr.hpp"

namespace momenta {

namespace {

std::string header_value(const std::string& line, const std::string& key) {
    // "# key value"
    std::string prefix = "# " + key + " ";
    if (line.rfind(prefix, 0) != 0)
        fail(ErrorClass::parse_error, "expected moment-file header '" + prefix + "...', got '" + line + "'");
    return line.substr(prefix.size());
}

} // namespace

MomentFileData read_moment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorClass::parse_error, "cannot open moment file '" + path + "'");
    MomentFileData data;
    std::string line;
    if (!std::getline(in, line))
        fail(ErrorClass::parse_error, "empty moment file '" + path + "'");
    data.component = std::stoi(header_value(line, "component"));
    if (!std::getline(in, line))
        fail(ErrorClass::parse_error, "truncated moment file '" + path + "'");
    data.eps_order = std::stoi(header_value(line, "eps-order"));
    if (!std::getline(in, line))
        fail(ErrorClass::parse_error, "truncated moment file '" + path + "'");
    data.recurrence_hash = header_value(line, "recurrence-hash");
    long expected = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            fail(ErrorClass::parse_error, "bad moment row '" + line + "' in '" + path + "'");
        long n = std::stol(line.substr(0, comma));
        if (n != expected)
            fail(ErrorClass::parse_error,
                 "moment rows must ascend from 0 without gaps; got n=" + std::to_string(n) +
                     " expecting " + std::to_string(expected) + " in '" + path + "'");
        data.values.push_back(parse_rational(line.substr(comma + 1)));
        ++expected;
    }
    return data;
}

void write_moment_file(const std::string& path, const MomentFileData& data) {
    std::ofstream out(path);
    if (!out)
        fail(ErrorClass::internal, "cannot write moment file '" + path + "'");
    out << "# component " << data.component << "\n";
    out << "# eps-order " << data.eps_order << "\n";
    out << "# recurrence-hash " << data.recurrence_hash << "\n";
    for (std::size_t n = 0; n < data.values.size(); ++n)
        out << n << "," << rational_str(data.values[n]) << "\n";
}

RecurrenceFileData read_recurrence_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorClass::parse_error, "cannot open recurrence file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("order ", 0) != 0)
        fail(ErrorClass::parse_error, "recurrence file must start with 'order d': '" + path + "'");
    int order = std::stoi(line.substr(6));
    if (order < 0)
        fail(ErrorClass::parse_error, "negative recurrence order in '" + path + "'");
    RecurrenceFileData data;
    data.coeffs.assign(static_cast<std::size_t>(order) + 1, BiPoly(Var::n));
    std::vector<bool> seen(data.coeffs.size(), false);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line.rfind("rhs: ", 0) == 0) {
            std::string p = line.substr(5);
            if (p != "none")
                data.rhs_path = p;
            continue;
        }
        if (line.rfind("a_", 0) != 0)
            fail(ErrorClass::parse_error, "bad recurrence line '" + line + "' in '" + path + "'");
        auto colon = line.find(':');
        if (colon == std::string::npos)
            fail(ErrorClass::parse_error, "bad recurrence line '" + line + "' in '" + path + "'");
        int i = std::stoi(line.substr(2, colon - 2));
        if (i < 0 || i > order)
            fail(ErrorClass::parse_error, "coefficient index out of range in '" + path + "'");
        data.coeffs[static_cast<std::size_t>(i)] = parse_bipoly(line.substr(colon + 1), Var::n);
        seen[static_cast<std::size_t>(i)] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            fail(ErrorClass::parse_error,
                 "missing coefficient a_" + std::to_string(i) + " in '" + path + "'");
    if (data.coeffs.back().is_zero())
        fail(ErrorClass::parse_error, "leading recurrence coefficient is zero in '" + path + "'");
    return data;
}

void write_recurrence_file(const std::string& path, const RecurrenceFileData& data) {
    std::ofstream out(path);
    if (!out)
        fail(ErrorClass::internal, "cannot write recurrence file '" + path + "'");
    out << "order " << data.coeffs.size() - 1 << "\n";
    for (std::size_t i = 0; i < data.coeffs.size(); ++i)
        out << "a_" << i << ": " << data.coeffs[i].str() << "\n";
    out << "rhs: " << (data.rhs_path ? *data.rhs_path : "none") << "\n";
}

std::string recurrence_repr(const std::vector<BiPoly>& coeffs) {
    std::ostringstream os;
    os << "order " << coeffs.size() - 1 << ";";
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        os << "a_" << i << ":" << coeffs[i].str() << ";";
    return os.str();
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

} // namespace momenta
