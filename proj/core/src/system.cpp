#include "momenta/system.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "momenta/expr.hpp"
#include "momenta/io.hpp"

namespace momenta {

namespace {

using nlohmann::json;

std::optional<EpsWindow> parse_window(const json& j, const std::string& where) {
    if (j.is_null())
        return std::nullopt;
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        fail(ErrorClass::parse_error, where + ": window must be [l, r]");
    EpsWindow w{j[0].get<int>(), j[1].get<int>()};
    if (w.lo > w.hi)
        fail(ErrorClass::parse_error, where + ": window has l > r");
    return w;
}

std::map<int, std::string> parse_order_map(const json& j, const std::string& where) {
    std::map<int, std::string> out;
    if (!j.is_object())
        fail(ErrorClass::parse_error, where + ": expected an object keyed by ep-order");
    for (auto it = j.begin(); it != j.end(); ++it) {
        int k;
        try {
            k = std::stoi(it.key());
        } catch (...) {
            fail(ErrorClass::parse_error, where + ": bad ep-order key '" + it.key() + "'");
        }
        if (!it.value().is_string())
            fail(ErrorClass::parse_error, where + ": values must be strings");
        out[k] = it.value().get<std::string>();
    }
    return out;
}

MomentProvider parse_provider(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        fail(ErrorClass::parse_error, where + ": provider needs a 'kind' string");
    std::string kind = j["kind"].get<std::string>();
    auto window = j.contains("window") ? parse_window(j["window"], where) : std::nullopt;
    if (kind == "zero")
        return MomentProvider::zero();
    if (kind == "constant") {
        std::map<int, Rational> values;
        if (j.contains("values")) {
            for (const auto& [k, text] : parse_order_map(j["values"], where))
                values[k] = parse_rational(text);
        } else if (j.contains("value")) {
            int at = j.value("order", 0);
            values[at] = parse_rational(j["value"].get<std::string>());
        }
        return MomentProvider::constant(std::move(values), window);
    }
    if (kind == "harmonic") {
        std::map<int, HarmonicExpr> exprs;
        if (j.contains("terms")) {
            for (const auto& [k, text] : parse_order_map(j["terms"], where))
                exprs.emplace(k, HarmonicExpr::parse(text));
        } else if (j.contains("expression")) {
            int at = j.value("order", 0);
            exprs.emplace(at, HarmonicExpr::parse(j["expression"].get<std::string>()));
        }
        return MomentProvider::harmonic(std::move(exprs), window);
    }
    if (kind == "file") {
        if (!j.contains("files") || !j["files"].is_array())
            fail(ErrorClass::parse_error, where + ": file provider needs a 'files' array");
        std::vector<std::string> paths;
        for (const auto& p : j["files"])
            paths.push_back(p.get<std::string>());
        return MomentProvider::from_files(std::move(paths), window);
    }
    if (kind == "composite") {
        if (!j.contains("terms") || !j["terms"].is_array())
            fail(ErrorClass::parse_error, where + ": composite provider needs a 'terms' array");
        std::vector<std::pair<PolyFrac, MomentProvider>> terms;
        int idx = 0;
        for (const auto& t : j["terms"]) {
            std::string sub_where = where + ".terms[" + std::to_string(idx++) + "]";
            if (!t.contains("coeff") || !t.contains("provider"))
                fail(ErrorClass::parse_error, sub_where + ": needs 'coeff' and 'provider'");
            terms.emplace_back(parse_polyfrac(t["coeff"].get<std::string>(), Var::n),
                               parse_provider(t["provider"], sub_where));
        }
        return MomentProvider::composite(std::move(terms), window);
    }
    if (kind == "recurrence") {
        if (!j.contains("layers") || !j["layers"].is_object())
            fail(ErrorClass::parse_error,
                 where + ": recurrence provider needs a 'layers' object keyed by ep-order");
        std::map<int, MomentProvider::RecurrenceLayer> layers;
        for (auto it = j["layers"].begin(); it != j["layers"].end(); ++it) {
            int k;
            try {
                k = std::stoi(it.key());
            } catch (...) {
                fail(ErrorClass::parse_error, where + ": bad ep-order key '" + it.key() + "'");
            }
            const auto& layer_json = it.value();
            if (!layer_json.contains("recurrence"))
                fail(ErrorClass::parse_error, where + ": layer needs a 'recurrence' file path");
            RecurrenceFileData rf = read_recurrence_file(layer_json["recurrence"].get<std::string>());
            MomentProvider::RecurrenceLayer layer;
            EpsRecurrence eps;
            eps.a = rf.coeffs;
            RecurrenceMeta meta = recurrence_meta(eps);
            if (meta.d_prime != meta.d)
                fail(ErrorClass::parse_error,
                     where + ": provider recurrences must be ep-free");
            layer.rec = layer_recurrence(eps);
            if (layer_json.contains("init"))
                for (const auto& v : layer_json["init"])
                    layer.init.push_back(parse_rational(v.get<std::string>()));
            if (rf.rhs_path)
                layer.rhs = read_moment_file(*rf.rhs_path).values;
            layers.emplace(k, std::move(layer));
        }
        return MomentProvider::recurrence_backed(std::move(layers), window);
    }
    fail(ErrorClass::parse_error, where + ": unknown provider kind '" + kind + "'");
}

json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        fail(ErrorClass::parse_error, "malformed JSON in " + what);
    return j;
}

} // namespace

CoupledSystem parse_system(const std::string& json_text) {
    json j = parse_json(json_text, "system document");
    CoupledSystem sys;
    if (!j.contains("lambda") || !j["lambda"].is_number_integer())
        fail(ErrorClass::parse_error, "system document needs an integer 'lambda'");
    sys.lambda = j["lambda"].get<int>();
    if (sys.lambda < 1)
        fail(ErrorClass::parse_error, "lambda must be positive");
    sys.name = j.value("name", std::string("system"));

    if (!j.contains("matrix") || !j["matrix"].is_array())
        fail(ErrorClass::parse_error, "system document needs a 'matrix' array");
    const auto& m = j["matrix"];
    if (static_cast<int>(m.size()) != sys.lambda * sys.lambda)
        fail(ErrorClass::parse_error,
             "matrix has " + std::to_string(m.size()) + " entries, expected lambda^2 = " +
                 std::to_string(sys.lambda * sys.lambda) + " (non-square system)");
    for (int idx = 0; idx < sys.lambda * sys.lambda; ++idx) {
        const auto& e = m[static_cast<std::size_t>(idx)];
        if (!e.is_string())
            fail(ErrorClass::parse_error, "matrix[" + std::to_string(idx) + "] must be a string");
        try {
            sys.matrix.push_back(parse_ratfunc(e.get<std::string>(), Var::x));
        } catch (const Error& err) {
            fail(err.cls(), "matrix[" + std::to_string(idx) + "]: " + err.what());
        }
    }

    if (j.contains("lhs")) {
        const auto& l = j["lhs"];
        if (!l.is_array() || static_cast<int>(l.size()) != sys.lambda)
            fail(ErrorClass::parse_error, "'lhs' must list one expression per component");
        for (int i = 0; i < sys.lambda; ++i) {
            RatFunc h = parse_ratfunc(l[static_cast<std::size_t>(i)].get<std::string>(), Var::x);
            if (h.is_zero())
                fail(ErrorClass::parse_error, "lhs[" + std::to_string(i) + "] is zero");
            sys.lhs.push_back(std::move(h));
        }
    } else {
        sys.lhs.assign(static_cast<std::size_t>(sys.lambda), RatFunc::constant(Var::x, 1));
    }

    if (!j.contains("rhs") || !j["rhs"].is_array() ||
        static_cast<int>(j["rhs"].size()) != sys.lambda)
        fail(ErrorClass::parse_error, "system document needs a 'rhs' array of lambda providers");
    for (int i = 0; i < sys.lambda; ++i)
        sys.rhs.push_back(
            parse_provider(j["rhs"][static_cast<std::size_t>(i)], "rhs[" + std::to_string(i) + "]"));

    if (j.contains("windows")) {
        if (!j["windows"].is_object())
            fail(ErrorClass::parse_error, "'windows' must map component -> [l, r]");
        for (auto it = j["windows"].begin(); it != j["windows"].end(); ++it) {
            int comp = std::stoi(it.key());
            if (comp < 1 || comp > sys.lambda)
                fail(ErrorClass::parse_error, "windows: component " + it.key() + " out of range");
            auto w = parse_window(it.value(), "windows['" + it.key() + "']");
            if (w)
                sys.windows[comp] = *w;
        }
    }
    return sys;
}

CoupledSystem load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorClass::parse_error, "cannot open system file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_system(os.str());
}

std::string system_repr(const CoupledSystem& sys) {
    std::ostringstream os;
    os << "system " << sys.name << " lambda=" << sys.lambda << "\n";
    for (int i = 1; i <= sys.lambda; ++i) {
        os << "  (" << sys.lhs[static_cast<std::size_t>(i - 1)].str() << ") * D f" << i << " =";
        for (int jj = 1; jj <= sys.lambda; ++jj)
            os << " (" << sys.entry(i, jj).str() << ")*f" << jj << (jj < sys.lambda ? " +" : "");
        os << " + g" << i << "  [" << sys.rhs[static_cast<std::size_t>(i - 1)].describe() << "]\n";
    }
    return os.str();
}

InitialValues parse_initial_values(const std::string& json_text) {
    json j = parse_json(json_text, "initial-values document");
    if (!j.contains("initial-values") || !j["initial-values"].is_array())
        fail(ErrorClass::parse_error, "initial-values document needs an 'initial-values' array");
    InitialValues iv;
    for (const auto& entry : j["initial-values"]) {
        if (!entry.contains("component") || !entry.contains("eps-order") ||
            !entry.contains("values"))
            fail(ErrorClass::parse_error,
                 "each initial-values entry needs component, eps-order and values");
        int comp = entry["component"].get<int>();
        int k = entry["eps-order"].get<int>();
        std::vector<Rational> vals;
        for (const auto& v : entry["values"])
            vals.push_back(parse_rational(v.get<std::string>()));
        iv.set(comp, k, std::move(vals));
    }
    return iv;
}

InitialValues load_initial_values(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorClass::parse_error, "cannot open initial-values file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_initial_values(os.str());
}

} // namespace momenta
