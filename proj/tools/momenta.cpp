#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "momenta/guess.hpp"
#include "momenta/io.hpp"
#include "momenta/pipeline.hpp"
#include "momenta/solve.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace momenta;

namespace {

EpsWindow parse_window_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        fail(ErrorClass::parse_error, "window must be 'l:r', got '" + spec + "'");
    try {
        EpsWindow w{std::stoi(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1))};
        if (w.lo > w.hi)
            fail(ErrorClass::parse_error, "window '" + spec + "' has l > r");
        return w;
    } catch (const Error&) {
        throw;
    } catch (...) {
        fail(ErrorClass::parse_error, "window must be 'l:r', got '" + spec + "'");
    }
}

std::vector<EpsWindow> resolve_windows(const CoupledSystem& sys,
                                       const std::vector<std::string>& specs) {
    std::vector<EpsWindow> windows(static_cast<std::size_t>(sys.lambda), EpsWindow{0, 0});
    std::vector<bool> have(static_cast<std::size_t>(sys.lambda), false);
    for (const auto& [comp, w] : sys.windows) {
        windows[static_cast<std::size_t>(comp - 1)] = w;
        have[static_cast<std::size_t>(comp - 1)] = true;
    }
    for (const std::string& spec : specs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) {
            EpsWindow w = parse_window_spec(spec);
            for (int j = 0; j < sys.lambda; ++j) {
                windows[static_cast<std::size_t>(j)] = w;
                have[static_cast<std::size_t>(j)] = true;
            }
        } else {
            int comp = std::stoi(spec.substr(0, eq));
            if (comp < 1 || comp > sys.lambda)
                fail(ErrorClass::parse_error, "window component out of range in '" + spec + "'");
            windows[static_cast<std::size_t>(comp - 1)] = parse_window_spec(spec.substr(eq + 1));
            have[static_cast<std::size_t>(comp - 1)] = true;
        }
    }
    for (int j = 0; j < sys.lambda; ++j)
        if (!have[static_cast<std::size_t>(j)])
            fail(ErrorClass::parse_error,
                 "no ep-window for component " + std::to_string(j + 1) +
                     " (use --window l:r or j=l:r, or a 'windows' field in the system file)");
    return windows;
}

std::string moment_file_name(const std::string& name, int component, int eps_order) {
    return name + "_f" + std::to_string(component) + "_e" + std::to_string(eps_order) + ".mom";
}

std::vector<Rational> parse_value_list(const std::string& text) {
    std::vector<Rational> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!item.empty())
            out.push_back(parse_rational(item));
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

json stage_report_json(const StageReport& r, const CoupledSystem& sys) {
    json stage;
    stage["component"] = r.component;
    stage["ode-order"] = r.order;
    stage["eps-power-divided"] = r.norm.u;
    stage["content"] = r.norm.p.str();
    stage["content-x-power"] = r.norm.k;
    stage["recurrence-order"] = r.rec_order;
    stage["d-prime"] = r.d_prime;
    stage["delta"] = r.delta;
    stage["initial-count"] = r.init_required;
    stage["order-bound"] = r.bound;
    json coeffs = json::array();
    for (const BiPoly& a : r.recurrence.a)
        coeffs.push_back(a.str());
    stage["recurrence"] = coeffs;
    stage["rhs-offset"] = r.recurrence.rhs_offset;
    (void)sys;
    return stage;
}

int cmd_pipeline(const std::string& system_path, const std::string& init_path, long mu,
                 const std::vector<std::string>& window_specs, const std::string& out_dir,
                 bool oracle_check, bool verify_window) {
    CoupledSystem sys = load_system(system_path);
    InitialValues init = load_initial_values(init_path);
    std::vector<EpsWindow> windows = resolve_windows(sys, window_specs);
    fs::create_directories(out_dir);

    PipelineOptions options;
    options.verify_window = verify_window;
    PipelineResult result = pipeline_moments(sys, init, windows, mu, options);

    json manifest;
    manifest["system"] = sys.name;
    manifest["mu"] = mu;
    json jw = json::object();
    for (int j = 1; j <= sys.lambda; ++j)
        jw[std::to_string(j)] = {windows[static_cast<std::size_t>(j - 1)].lo,
                                 windows[static_cast<std::size_t>(j - 1)].hi};
    manifest["windows"] = jw;

    json stages = json::array();
    json files = json::object();
    for (const StageReport& r : result.reports)
        stages.push_back(stage_report_json(r, sys));
    manifest["stages"] = stages;

    for (const LayeredMoments& lm : result.components) {
        const StageReport& report = result.reports[static_cast<std::size_t>(lm.component - 1)];
        std::string hash = fnv1a_hex(recurrence_repr(report.recurrence.a));
        json per_component = json::object();
        for (int k = lm.stream.lo; k <= lm.stream.hi(); ++k) {
            MomentFileData data;
            data.component = lm.component;
            data.eps_order = k;
            data.recurrence_hash = hash;
            data.values = lm.stream.layer(k);
            std::string fname = moment_file_name(sys.name, lm.component, k);
            write_moment_file((fs::path(out_dir) / fname).string(), data);
            per_component[std::to_string(k)] = fname;
        }
        files["f" + std::to_string(lm.component)] = per_component;
    }
    manifest["moment-files"] = files;
    if (verify_window)
        manifest["window-verify"] = "match";

    if (oracle_check) {
        auto oracle = direct_oracle(sys, init, windows, mu);
        auto mismatch = compare_moments(result.components, oracle, windows, mu);
        if (mismatch)
            fail(ErrorClass::oracle_mismatch, *mismatch);
        manifest["oracle"] = "match";
    }

    std::ofstream mf(fs::path(out_dir) / "manifest.json");
    mf << manifest.dump(2) << "\n";
    std::cout << "pipeline: wrote " << result.components.size() << " component(s) to " << out_dir
              << "\n";
    return 0;
}

int cmd_moments(const std::string& rec_path, const std::string& init_values, long mu,
                const std::string& out_path, const std::string& extend_path, int component,
                int eps_order) {
    RecurrenceFileData rf = read_recurrence_file(rec_path);
    std::string hash = fnv1a_hex(recurrence_repr(rf.coeffs));

    EpsRecurrence eps;
    eps.a = rf.coeffs;
    RecurrenceMeta meta = recurrence_meta(eps);
    if (meta.d_prime != meta.d)
        fail(ErrorClass::degenerate_input,
             "moments command expects an ep-free recurrence (use solve for layered ones)");
    Recurrence rec = layer_recurrence(eps);

    std::vector<Rational> rhs;
    if (rf.rhs_path) {
        MomentFileData rdata = read_moment_file(*rf.rhs_path);
        rhs = std::move(rdata.values);
    }

    std::vector<Rational> init = parse_value_list(init_values);
    int out_order = eps_order;
    if (!extend_path.empty()) {
        MomentFileData old = read_moment_file(extend_path);
        if (old.recurrence_hash != hash)
            fail(ErrorClass::checkpoint_mismatch,
                 "checkpoint was produced by recurrence " + old.recurrence_hash +
                     ", refusing to extend with " + hash);
        init = std::move(old.values);
        component = old.component;
        out_order = old.eps_order;
    }

    std::vector<Rational> values = propagate(rec, rhs, init, mu);
    MomentFileData data;
    data.component = component;
    data.eps_order = out_order;
    data.recurrence_hash = hash;
    data.values = std::move(values);
    write_moment_file(out_path, data);
    std::cout << "moments: wrote " << data.values.size() << " rows to " << out_path << "\n";
    return 0;
}

int cmd_uncouple(const std::string& system_path, bool normalize) {
    CoupledSystem sys = load_system(system_path);
    std::cout << system_repr(sys);
    PreparedStages st = prepare_stages(sys);
    for (int j = 1; j <= sys.lambda; ++j) {
        auto idx = static_cast<std::size_t>(j - 1);
        std::cout << "stage f" << j << " (order " << st.raw.stages[idx].order << "):\n  "
                  << st.raw.stages[idx].str() << "\n";
        if (normalize) {
            std::cout << "  normalized: " << st.normalized[idx].str() << "\n";
            std::cout << "  eps-power u = " << st.records[idx].u << ", content p = "
                      << st.records[idx].p.str() << ", x-power k = " << st.records[idx].k << "\n";
            std::cout << "  recurrence order d = " << st.metas[idx].d
                      << ", d' = " << st.metas[idx].d_prime << ", delta = " << st.metas[idx].delta
                      << ", initial values = " << st.metas[idx].required_initial_count
                      << ", bound = " << st.bounds[idx] << "\n";
        }
    }
    return 0;
}

int cmd_guess(const std::string& moment_path, int max_order, int max_degree, int holdout,
              const std::string& out_path) {
    MomentFileData data = read_moment_file(moment_path);
    GuessConfig cfg;
    cfg.max_order = max_order;
    cfg.max_degree = max_degree;
    cfg.holdout = holdout;
    auto rec = guess_recurrence(data.values, cfg);
    if (!rec)
        fail(ErrorClass::no_recurrence_found,
             "no recurrence with order <= " + std::to_string(max_order) + " and degree <= " +
                 std::to_string(max_degree) + " annihilates " + moment_path);
    RecurrenceFileData rf;
    for (const Poly& p : rec->a)
        rf.coeffs.push_back(BiPoly::from_outer(p));
    write_recurrence_file(out_path, rf);
    std::cout << "guess: order " << rec->order() << " recurrence written to " << out_path << "\n";
    return 0;
}

int cmd_solve(const std::string& rec_path, const std::string& init_path, int component,
              const std::string& window_spec, long mu, const std::string& out_path) {
    RecurrenceFileData rf = read_recurrence_file(rec_path);
    EpsRecurrence rec;
    rec.a = rf.coeffs;

    EpsWindow window{0, 0};
    if (!window_spec.empty())
        window = parse_window_spec(window_spec);

    std::map<int, LayerRhs> rhs;
    if (rf.rhs_path) {
        MomentFileData rdata = read_moment_file(*rf.rhs_path);
        LayerRhs lr;
        lr.kind = LayerRhs::Kind::stream;
        lr.values = std::move(rdata.values);
        rhs[rdata.eps_order] = std::move(lr);
    }

    InitialValues iv;
    if (!init_path.empty())
        iv = load_initial_values(init_path);
    LayerInits inits = [&](int layer) { return iv.get(component, layer); };

    EpsSolveOptions options;
    options.fallback_mu = mu;
    LayeredSolution sol = eps_layer_solve(rec, rhs, inits, window, options);

    std::ofstream out(out_path);
    if (!out)
        fail(ErrorClass::internal, "cannot write '" + out_path + "'");
    out << "window " << window.lo << ":" << window.hi << "\n";
    out << "lambda-max " << sol.lambda_max << "\n";
    fs::path moments_dir = fs::path(out_path).parent_path();
    for (int k = window.lo; k <= window.hi; ++k) {
        const SolutionExpr& se = sol.layers[static_cast<std::size_t>(k - window.lo)];
        if (se.kind == SolutionExpr::Kind::rational) {
            out << "layer " << k << ": rational: " << se.seq.expr.str() << "\n";
            out << "layer " << k << ": valid-from: " << se.seq.valid_from << "\n";
            for (long n = 0; n < se.seq.valid_from; ++n)
                out << "layer " << k << ": exceptional: " << n << ","
                    << rational_str(se.seq.prefix[static_cast<std::size_t>(n)]) << "\n";
        } else {
            std::string fname =
                (fs::path(out_path).stem().string()) + "_e" + std::to_string(k) + ".mom";
            MomentFileData data;
            data.component = component;
            data.eps_order = k;
            data.recurrence_hash = fnv1a_hex(recurrence_repr(rec.a));
            data.values = se.values;
            write_moment_file((moments_dir / fname).string(), data);
            out << "layer " << k << ": moments: " << fname << "\n";
        }
    }
    std::cout << "solve: lambda-max " << sol.lambda_max << ", written to " << out_path << "\n";
    return 0;
}

int cmd_oracle_check(const std::string& system_path, const std::string& init_path, long mu,
                     const std::vector<std::string>& window_specs) {
    CoupledSystem sys = load_system(system_path);
    InitialValues init = load_initial_values(init_path);
    std::vector<EpsWindow> windows = resolve_windows(sys, window_specs);
    PipelineResult result = pipeline_moments(sys, init, windows, mu);
    auto oracle = direct_oracle(sys, init, windows, mu);
    auto mismatch = compare_moments(result.components, oracle, windows, mu);
    if (mismatch)
        fail(ErrorClass::oracle_mismatch, *mismatch);
    std::cout << "oracle: match (" << sys.lambda << " component(s), mu = " << mu << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact power-series moments of coupled linear ODE systems"};
    app.require_subcommand(1);

    std::string system_path, init_path, out_dir = "out", out_path, extend_path, rec_path,
                moment_path, init_values, window_spec;
    std::vector<std::string> window_specs;
    long mu = 0;
    int max_order = 3, max_degree = 3, holdout = 50, component = 1, eps_order = 0;
    bool oracle_check = false, verify_window = false, normalize = false;

    auto* pipeline = app.add_subcommand("pipeline", "uncouple and propagate a coupled system");
    pipeline->add_option("system", system_path, "system file (JSON)")->required();
    pipeline->add_option("--init", init_path, "initial-values file (JSON)")->required();
    pipeline->add_option("--mu", mu, "highest moment index")->required();
    pipeline->add_option("--window", window_specs, "ep-window 'l:r' or 'j=l:r' (repeatable)");
    pipeline->add_option("--out", out_dir, "output directory");
    pipeline->add_flag("--oracle-check", oracle_check, "cross-check against the direct oracle");
    pipeline->add_flag("--verify-window", verify_window,
                       "recompute with widened requirements and compare");

    auto* moments = app.add_subcommand("moments", "propagate or extend one moment stream");
    moments->add_option("recurrence", rec_path, "recurrence file")->required();
    moments->add_option("--init", init_values, "comma-separated initial values");
    moments->add_option("--mu", mu, "highest moment index")->required();
    moments->add_option("--out", out_path, "output moment file")->required();
    moments->add_option("--extend", extend_path, "moment file to extend (hash-checked)");
    moments->add_option("--component", component, "component tag for the header");
    moments->add_option("--eps-order", eps_order, "ep-order tag for the header");

    auto* uncouple = app.add_subcommand("uncouple", "print the staged scalar equations");
    uncouple->add_option("system", system_path, "system file (JSON)")->required();
    uncouple->add_flag("--normalize", normalize, "also print normalized stages and recurrences");

    auto* guess = app.add_subcommand("guess", "fit a recurrence to a moment stream");
    guess->add_option("moments", moment_path, "moment file")->required();
    guess->add_option("--max-order", max_order, "largest recurrence order tried");
    guess->add_option("--max-degree", max_degree, "largest coefficient degree tried");
    guess->add_option("--holdout", holdout, "moments reserved for verification");
    guess->add_option("--out", out_path, "output recurrence file")->required();

    auto* solve = app.add_subcommand("solve", "solve a recurrence layer by layer in ep");
    solve->add_option("recurrence", rec_path, "recurrence file")->required();
    solve->add_option("--init", init_path, "initial-values file (JSON)");
    solve->add_option("--component", component, "component the initial values belong to");
    solve->add_option("--window", window_spec, "ep-window 'l:r'");
    solve->add_option("--mu", mu, "fallback stream length")->default_val(200);
    solve->add_option("--out", out_path, "output solution file")->required();

    auto* oracle = app.add_subcommand("oracle-check", "compare pipeline against the direct oracle");
    oracle->add_option("system", system_path, "system file (JSON)")->required();
    oracle->add_option("--init", init_path, "initial-values file (JSON)")->required();
    oracle->add_option("--mu", mu, "highest moment index")->required();
    oracle->add_option("--window", window_specs, "ep-window 'l:r' or 'j=l:r' (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (pipeline->parsed())
            return cmd_pipeline(system_path, init_path, mu, window_specs, out_dir, oracle_check,
                                verify_window);
        if (moments->parsed())
            return cmd_moments(rec_path, init_values, mu, out_path, extend_path, component,
                               eps_order);
        if (uncouple->parsed())
            return cmd_uncouple(system_path, normalize);
        if (guess->parsed())
            return cmd_guess(moment_path, max_order, max_degree, holdout, out_path);
        if (solve->parsed())
            return cmd_solve(rec_path, init_path, component, window_spec, mu, out_path);
        if (oracle->parsed())
            return cmd_oracle_check(system_path, init_path, mu, window_specs);
    } catch (const Error& e) {
        std::cerr << error_class_name(e.cls()) << ": " << e.what() << "\n";
        return error_exit_code(e.cls());
    } catch (const std::exception& e) {
        std::cerr << "internal: " << e.what() << "\n";
        return error_exit_code(ErrorClass::internal);
    }
    return 0;
}
