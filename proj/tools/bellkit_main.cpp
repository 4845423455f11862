// bellkit: CHSH coincidence-data analysis from the command line.
//
// Subcommands: analyze (classify a dataset file), demo (bundled datasets and
// models), simulate (seeded Monte Carlo mechanisms), construct (build a
// measurement model reproducing a dataset from a fixed state).
//
// Exit codes: 0 success, 2 usage or document-shape problems, 3 invalid
// probability data.

#include <bellkit/bellkit.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace bellkit;

constexpr double kDegToRad = M_PI / 180.0;

struct CommonFlags {
    std::string format = "text";
    double tol_bell = kBellTol;
    double tol_marginal = kMarginalTol;
    double tol_product = kProductTol;
    bool normalize = false;

    bool json() const { return format == "json"; }
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--format", flags.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    cmd->add_option("--tol-bell", flags.tol_bell, "CHSH threshold tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--tol-marginal", flags.tol_marginal, "Marginal-law tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--tol-product", flags.tol_product, "Product-test tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io::SchemaError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

BellData load_bell_data(const std::string& path, bool normalize) {
    io::json doc;
    try {
        doc = io::json::parse(read_file(path));
    } catch (const io::json::parse_error& e) {
        throw io::SchemaError(path + ": invalid JSON: " + e.what());
    }
    return io::bell_data_from_json(doc, normalize);
}

void print_tables(const BellData& d, int decimals = 6) {
    for (int c = 0; c < 4; ++c) {
        const auto& p = d.tables[c].p;
        std::printf("  %-4s : [%.*f  %.*f]  [%.*f  %.*f]\n", kContextNames[c], decimals, p[0][0],
                    decimals, p[0][1], decimals, p[1][0], decimals, p[1][1]);
    }
}

void print_report_text(const ClassificationReport& r) {
    static constexpr std::array<const char*, 4> kExpectationNames{"E(A,B)  ", "E(A,B') ",
                                                                  "E(A',B) ", "E(A',B')"};
    std::printf("Expectations:\n");
    for (int c = 0; c < 4; ++c) std::printf("  %s = % .6f\n", kExpectationNames[c], r.expectations[c]);
    std::printf("CHSH:\n");
    std::printf("  S = E(A',B') + E(A',B) + E(A,B') - E(A,B) = % .6f\n", r.chsh_fixed);
    std::printf("  max |S| over sign conventions             = % .6f\n", r.chsh_max);
    std::printf("Marginal law audit (shared-setting marginals across contexts):\n");
    for (const MarginalDeviation& dev : r.marginal_deviations)
        std::printf("  %-3s : %.6f (%s) vs %.6f (%s)   deviation %.6f\n", dev.setting.c_str(),
                    dev.lhs, kContextNames[static_cast<int>(dev.lhs_context)], dev.rhs,
                    kContextNames[static_cast<int>(dev.rhs_context)], dev.deviation);
    std::printf("  max deviation = %.6f -> marginal law %s\n", r.max_marginal_deviation,
                r.max_marginal_deviation <= r.tol_marginal ? "satisfied" : "violated");
    std::printf("Factorizable tables:");
    for (int c = 0; c < 4; ++c)
        std::printf("  %s: %s", kContextNames[c], r.factorizations[c].factorizable ? "yes" : "no");
    std::printf("\nVerdict: %s (%s)\n", verdict_name(r.verdict), verdict_description(r.verdict));
}

int cmd_analyze(const std::string& path, const CommonFlags& flags) {
    BellData d = load_bell_data(path, flags.normalize);
    ClassificationReport report = classify(d, flags.tol_bell, flags.tol_marginal);
    if (flags.json()) {
        io::ordered_json out;
        out["input"] = io::bell_data_to_json(d);
        out["report"] = io::report_to_json(report);
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("Input tables:\n");
        print_tables(d);
        print_report_text(report);
    }
    return 0;
}

// Per-context verification numbers of a quantum model: Born tables, the
// nonselective-update drift, product verdicts of the outcome bases.
struct ModelVerification {
    BellData predicted;
    std::array<double, 4> luders_shift{};
    std::array<CoincidenceProductReport, 4> product{};
    double chsh_trace = 0.0;
};

ModelVerification verify_model(const QuantumBellModel& model, double tol_product) {
    ModelVerification v;
    v.predicted = predicted_bell_data(model);
    ProductIsomorphism id = ProductIsomorphism::identity();
    for (int c = 0; c < 4; ++c) {
        v.luders_shift[c] =
            max_abs((luders_update(model.state, model.observables[c]).matrix() - model.state.matrix()).eval());
        v.product[c] = is_product_coincidence_measurement(model.observables[c], id, tol_product);
    }
    v.chsh_trace = chsh_operator_expectation(model);
    return v;
}

io::ordered_json model_to_json(const QuantumBellModel& model, const ModelVerification& v) {
    io::ordered_json out;
    io::ordered_json contexts;
    for (int c = 0; c < 4; ++c) {
        const SpectralFamily4& family = model.observables[c];
        io::ordered_json basis = io::ordered_json::array();
        for (int k = 0; k < 4; ++k) {
            Eigen::SelfAdjointEigenSolver<Mat4> solver(family.projectors[k]);
            basis.push_back(io::vec4_to_json(solver.eigenvectors().col(3)));
        }
        const auto& p = v.predicted.tables[c].p;
        contexts[kContextNames[c]] = {
            {"outcome_values", family.eigenvalues},
            {"basis", basis},
            {"born", {{p[0][0], p[0][1]}, {p[1][0], p[1][1]}}},
            {"product_measurement", v.product[c].is_product},
            {"product_residual", v.product[c].residual},
            {"luders_shift", v.luders_shift[c]},
        };
    }
    out["contexts"] = contexts;
    out["chsh_operator_expectation"] = v.chsh_trace;
    return out;
}

void print_model_text(const ModelVerification& v, double tol_marginal) {
    std::printf("Born tables:\n");
    print_tables(v.predicted);
    std::printf("Nonselective (Luders) update drift per context:\n");
    for (int c = 0; c < 4; ++c)
        std::printf("  %-4s : max |rho' - rho| = %.3e\n", kContextNames[c], v.luders_shift[c]);
    std::printf("Outcome bases:");
    for (int c = 0; c < 4; ++c)
        std::printf("  %s: %s", kContextNames[c], v.product[c].is_product ? "product" : "entangled");
    std::printf("\ntr(rho B) = %.6f\n", v.chsh_trace);
    double deviation = max_marginal_deviation(v.predicted);
    std::printf("marginal law %s (max deviation %.3e)\n",
                deviation <= tol_marginal ? "satisfied" : "violated", deviation);
}

int cmd_demo(const std::string& name, const CommonFlags& flags) {
    const std::vector<std::string> available{"animal-acts", "vessels", "cats", "nonlocal-box",
                                             "spheres"};
    if (std::find(available.begin(), available.end(), name) == available.end()) {
        std::fprintf(stderr, "error: unknown demo '%s'; available:", name.c_str());
        for (const std::string& d : available) std::fprintf(stderr, " %s", d.c_str());
        std::fprintf(stderr, "\n");
        return 2;
    }

    io::ordered_json out;
    out["demo"] = name;

    if (name == "animal-acts" || name == "vessels" || name == "cats") {
        BellData d = name == "animal-acts" ? datasets::animal_acts()
                     : name == "vessels"   ? vessels_deterministic()
                                           : cats_gedanken();
        ClassificationReport report = classify(d, flags.tol_bell, flags.tol_marginal);
        if (flags.json()) {
            out["data"] = io::bell_data_to_json(d);
            out["report"] = io::report_to_json(report);
            std::printf("%s\n", out.dump(2).c_str());
        } else {
            std::printf("Coincidence tables (%s):\n", name.c_str());
            print_tables(d, 3);
            print_report_text(report);
        }
        return 0;
    }

    if (name == "nonlocal-box") {
        QuantumBellModel model = nonlocal_box_model();
        ModelVerification v = verify_model(model, flags.tol_product);
        ClassificationReport report = classify(v.predicted, flags.tol_bell, flags.tol_marginal);
        if (flags.json()) {
            out["model"] = model_to_json(model, v);
            out["report"] = io::report_to_json(report);
            std::printf("%s\n", out.dump(2).c_str());
        } else {
            std::printf("Mixed-state box model (alpha = beta = 0):\n");
            print_model_text(v, flags.tol_marginal);
            print_report_text(report);
        }
        return 0;
    }

    // spheres: analytic tables at the maximizing angles plus a short seeded run.
    SphereExperimentConfig cfg;
    cfg.angle_a = 0.0;
    cfg.angle_a_prime = M_PI / 2.0;
    cfg.angle_b = 3.0 * M_PI / 4.0;
    cfg.angle_b_prime = M_PI / 4.0;
    cfg.trials = 100000;
    cfg.seed = 1;
    SimulationResult result = spheres_simulate(cfg);
    ClassificationReport analytic_report = classify(*result.analytic, flags.tol_bell, flags.tol_marginal);
    if (flags.json()) {
        out["angles_deg"] = {{"a", 0.0}, {"a'", 90.0}, {"b", 135.0}, {"b'", 45.0}};
        out["trials"] = result.trials;
        out["seed"] = result.seed;
        out["analytic"] = io::bell_data_to_json(*result.analytic);
        out["empirical"] = io::bell_data_to_json(result.empirical);
        out["analytic_report"] = io::report_to_json(analytic_report);
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("Connected-spheres mechanism at angles 0/90/135/45 degrees\n");
        std::printf("Analytic tables:\n");
        print_tables(*result.analytic);
        std::printf("Empirical tables (%llu trials, seed %llu):\n",
                    static_cast<unsigned long long>(result.trials),
                    static_cast<unsigned long long>(result.seed));
        print_tables(result.empirical);
        print_report_text(analytic_report);
    }
    return 0;
}

int cmd_simulate(const std::string& model, double a_deg, double ap_deg, double b_deg,
                 double bp_deg, std::uint64_t trials, std::uint64_t seed,
                 const CommonFlags& flags) {
    SimulationResult result;
    io::ordered_json out;
    out["model"] = model;
    if (model == "spheres") {
        SphereExperimentConfig cfg;
        cfg.angle_a = a_deg * kDegToRad;
        cfg.angle_a_prime = ap_deg * kDegToRad;
        cfg.angle_b = b_deg * kDegToRad;
        cfg.angle_b_prime = bp_deg * kDegToRad;
        cfg.trials = trials;
        cfg.seed = seed;
        result = spheres_simulate(cfg);
        out["angles_deg"] = {{"a", a_deg}, {"a'", ap_deg}, {"b", b_deg}, {"b'", bp_deg}};
    } else {
        result = vessels_nonlocal_box(trials, seed);
    }

    ClassificationReport empirical_report =
        classify(result.empirical, flags.tol_bell, flags.tol_marginal);
    ClassificationReport analytic_report =
        classify(*result.analytic, flags.tol_bell, flags.tol_marginal);

    if (flags.json()) {
        out["trials"] = result.trials;
        out["seed"] = result.seed;
        out["counts"] = io::counts_to_json(result.counts);
        out["empirical"] = io::bell_data_to_json(result.empirical);
        out["analytic"] = io::bell_data_to_json(*result.analytic);
        out["empirical_report"] = io::report_to_json(empirical_report);
        out["analytic_report"] = io::report_to_json(analytic_report);
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("Simulation: %s, %llu trials, seed %llu\n", model.c_str(),
                    static_cast<unsigned long long>(result.trials),
                    static_cast<unsigned long long>(result.seed));
        std::printf("Empirical tables:\n");
        print_tables(result.empirical);
        std::printf("Analytic tables:\n");
        print_tables(*result.analytic);
        std::printf("--- empirical analysis ---\n");
        print_report_text(empirical_report);
        std::printf("--- analytic analysis ---\n");
        print_report_text(analytic_report);
    }
    return 0;
}

int cmd_construct(const std::string& path, const std::vector<double>& state_values,
                  const CommonFlags& flags) {
    BellData d = load_bell_data(path, flags.normalize);
    std::optional<Vec4> state;
    if (!state_values.empty()) {
        Vec4 s;
        for (int k = 0; k < 4; ++k) s(k) = cdouble(state_values[2 * k], state_values[2 * k + 1]);
        if (s.norm() <= 0.0) throw io::SchemaError("--state: zero vector");
        state = s / s.norm();
    }
    QuantumBellModel model = bell_data_model(d, state);
    ModelVerification v = verify_model(model, flags.tol_product);

    double residual = 0.0;
    for (int c = 0; c < 4; ++c)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                residual = std::max(residual,
                                    std::abs(v.predicted.tables[c].p[i][j] - d.tables[c].p[i][j]));

    ClassificationReport report = classify(v.predicted, flags.tol_bell, flags.tol_marginal);
    if (flags.json()) {
        io::ordered_json out;
        Eigen::SelfAdjointEigenSolver<Mat4> solver(model.state.matrix());
        out["state"] = io::vec4_to_json(solver.eigenvectors().col(3));
        out["reproduction_residual"] = residual;
        out["model"] = model_to_json(model, v);
        out["report"] = io::report_to_json(report);
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("Measurement model reproducing %s\n", path.c_str());
        std::printf("reproduction residual = %.3e\n", residual);
        print_model_text(v, flags.tol_marginal);
        print_report_text(report);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CHSH coincidence-data analysis: classification, explicit Hilbert-space models, "
                 "and macroscopic Bell simulators"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::function<int()> action;

    auto* analyze = app.add_subcommand("analyze", "Classify a coincidence dataset file");
    {
        auto path = std::make_shared<std::string>();
        analyze->add_option("file", *path, "BellData JSON file")->required();
        analyze->add_flag("--normalize", flags.normalize,
                          "Accept tables that sum to 1 within 0.005 and rescale them");
        add_common_flags(analyze, flags);
        analyze->callback([&flags, path, &action] {
            action = [&flags, path] { return cmd_analyze(*path, flags); };
        });
    }

    auto* demo = app.add_subcommand("demo", "Run a bundled demonstration");
    {
        auto name = std::make_shared<std::string>();
        demo->add_option("name", *name, "animal-acts | vessels | cats | nonlocal-box | spheres")
            ->required();
        add_common_flags(demo, flags);
        demo->callback([&flags, name, &action] {
            action = [&flags, name] { return cmd_demo(*name, flags); };
        });
    }

    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo mechanism");
    {
        auto model = std::make_shared<std::string>();
        auto a = std::make_shared<double>(0.0), ap = std::make_shared<double>(0.0);
        auto b = std::make_shared<double>(0.0), bp = std::make_shared<double>(0.0);
        auto trials = std::make_shared<std::uint64_t>(100000);
        auto seed = std::make_shared<std::uint64_t>(0);
        simulate->add_option("model", *model, "spheres | vessels-box")
            ->required()
            ->check(CLI::IsMember({"spheres", "vessels-box"}));
        simulate->add_option("--a", *a, "A setting angle, degrees (spheres)");
        simulate->add_option("--ap", *ap, "A' setting angle, degrees (spheres)");
        simulate->add_option("--b", *b, "B setting angle, degrees (spheres)");
        simulate->add_option("--bp", *bp, "B' setting angle, degrees (spheres)");
        simulate->add_option("--trials", *trials, "Trials per context")->capture_default_str();
        simulate->add_option("--seed", *seed, "PRNG seed")->capture_default_str();
        add_common_flags(simulate, flags);
        simulate->callback([&flags, model, a, ap, b, bp, trials, seed, &action] {
            action = [&flags, model, a, ap, b, bp, trials, seed] {
                return cmd_simulate(*model, *a, *ap, *b, *bp, *trials, *seed, flags);
            };
        });
    }

    auto* construct = app.add_subcommand(
        "construct", "Build a measurement model reproducing a dataset from a fixed state");
    {
        auto path = std::make_shared<std::string>();
        auto state = std::make_shared<std::vector<double>>();
        construct->add_option("file", *path, "BellData JSON file")->required();
        construct->add_option("--state", *state,
                              "State amplitudes as 8 reals (re im, 4 slots); normalized automatically")
            ->expected(8);
        construct->add_flag("--normalize", flags.normalize,
                            "Accept tables that sum to 1 within 0.005 and rescale them");
        add_common_flags(construct, flags);
        construct->callback([&flags, path, state, &action] {
            action = [&flags, path, state] { return cmd_construct(*path, *state, flags); };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return action ? action() : 2;
    } catch (const io::SchemaError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const io::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
