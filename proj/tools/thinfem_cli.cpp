// thinfem: mesh generation, element classification, covering checks,
// interpolation studies and the six-triangle convergence table.
//
// Exit codes: 0 success, 1 domain-level failure (assumption not satisfied,
// solver failure, unreadable input), 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "thinfem/thinfem.hpp"

using json = nlohmann::ordered_json;
using namespace thinfem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Mesh source: a file, or one of the generators

struct MeshSource {
    std::string path;
    std::string generator;
    int K = 0;
    double alpha = 0.1;
    double eps = 0.05;

    void add_to(CLI::App* app) {
        auto* m = app->add_option("--mesh", path, "mesh file");
        auto* g = app->add_option("--gen", generator, "generator instead of a mesh file")
                      ->check(CLI::IsMember({"square-six", "uniform-right", "refined-diag"}));
        m->excludes(g);
        g->excludes(m);
        add_generator_params(app);
    }

    void add_generator_params(CLI::App* app) {
        app->add_option("--K", K, "cells per side");
        app->add_option("--alpha", alpha, "apex height ratio of the six-triangle mesh")->capture_default_str();
        app->add_option("--eps", eps, "offset of the diagonal points of the refined mesh")->capture_default_str();
    }

    Mesh2 load() const {
        if (!path.empty()) return read_mesh<2>(path);
        if (generator.empty()) throw UsageError("one of --mesh or --gen is required");
        return generate(generator);
    }

    Mesh2 generate(const std::string& kind) const {
        if (K <= 0) throw UsageError("--K is required and must be positive");
        if (kind == "square-six") return generate_square_six(K, alpha);
        if (kind == "uniform-right") return generate_uniform_right(K);
        return generate_refined_diag(K, eps);
    }

    json describe() const {
        json j;
        if (!path.empty()) {
            j["mesh"] = path;
            return j;
        }
        j["generator"] = generator;
        j["K"] = K;
        if (generator == "square-six") j["alpha"] = alpha;
        if (generator == "refined-diag") j["eps"] = eps;
        return j;
    }
};

double to_radians(double v, bool degrees) { return degrees ? v * std::numbers::pi / 180.0 : v; }

void emit(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw IoError("cannot open '" + out_path + "' for writing");
    f << text;
}

json witness_json(const Witness& w) {
    json j;
    j["covers"] = w.covers;
    j["elements"] = w.elements;
    j["vertices"] = w.vertices;
    j["detail"] = w.detail;
    return j;
}

json report_json(const CheckReport& r) {
    json j;
    j["assumption"] = r.assumption;
    j["satisfied"] = r.satisfied;
    j["multiplicity"] = r.multiplicity;
    j["max_cluster_size"] = r.max_cluster_size;
    j["max_cover_h_ratio"] = r.max_cover_h_ratio;
    j["mesh_h"] = r.mesh_h;
    j["conditions"] = json::array();
    for (const auto& c : r.conditions) {
        json cj;
        cj["name"] = c.name;
        cj["passed"] = c.passed;
        cj["violations"] = c.violation_count;
        cj["witnesses"] = json::array();
        for (const auto& w : c.witnesses) cj["witnesses"].push_back(witness_json(w));
        j["conditions"].push_back(cj);
    }
    return j;
}

json params_json(const CoverParams& p) {
    return json{{"theta", p.theta}, {"psi", p.psi}, {"C", p.C}, {"M", p.M}, {"N", p.N}};
}

ScalarField field_named(const std::string& name) {
    if (name == "quartic") return fields::quartic_bubble();
    if (name == "linear") return fields::affine(2, 3, -1);
    if (name == "quadratic") return fields::quadratic(1, 0, 1);
    throw UsageError("unknown field '" + name + "'");
}

std::string fixed_sig(double v, const char* fmt) {
    char buf[48];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

// ---------------------------------------------------------------------------
// Subcommands

struct GenCmd {
    std::string kind;
    MeshSource src;
    std::string out;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("gen", "generate a mesh of the unit square");
        c->add_option("kind", kind, "square-six | uniform-right | refined-diag")
            ->required()
            ->check(CLI::IsMember({"square-six", "uniform-right", "refined-diag"}));
        c->add_option("--K", src.K, "cells per side")->required();
        c->add_option("--alpha", src.alpha, "apex height ratio (square-six)")->capture_default_str();
        c->add_option("--eps", src.eps, "diagonal point offset (refined-diag)")->capture_default_str();
        c->add_option("-o,--output", out, "mesh file; stdout when omitted");
        c->callback([this] { run(); });
    }

    void run() {
        src.generator = kind;
        const auto m = src.generate(kind);
        if (out.empty()) {
            write_mesh(m, std::cout);
            return;
        }
        write_mesh(m, out);
        json j;
        j["config"] = src.describe();
        j["config"]["output"] = out;
        j["vertices"] = m.vertex_count();
        j["elements"] = m.element_count();
        j["boundary_vertices"] = m.boundary_vertices().size();
        j["h"] = mesh_h(m);
        emit(j, "");
    }
};

struct ClassifyCmd {
    MeshSource src;
    double theta = 0;
    bool degrees = false;
    bool list = false;
    std::string out;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("classify", "good / ordinary / bad element counts");
        src.add_to(c);
        c->add_option("--theta", theta, "quality angle")->required();
        c->add_flag("--deg", degrees, "angles in degrees");
        c->add_flag("--list", list, "list the class of every element");
        c->add_option("-o,--output", out, "report file; stdout when omitted");
        c->callback([this] { run(); });
    }

    void run() {
        const auto m = src.load();
        const double th = to_radians(theta, degrees);
        const auto rep = classify(m, th);
        json j;
        j["config"] = src.describe();
        j["config"]["theta"] = th;
        j["elements"] = m.element_count();
        j["good"] = rep.good;
        j["ordinary"] = rep.ordinary;
        j["bad"] = rep.bad;
        j["worst_min_angle"] = {{"element", rep.worst_min_element}, {"angle", rep.worst_min_angle}};
        j["worst_max_angle"] = {{"element", rep.worst_max_element}, {"angle", rep.worst_max_angle}};
        j["bad_elements"] = rep.elements_of(ElementClass::Bad);
        if (list) {
            j["classes"] = json::array();
            for (auto c : rep.classes) j["classes"].push_back(std::string(to_string(c)));
        }
        emit(j, out);
    }
};

struct CheckCoverCmd {
    MeshSource src;
    std::optional<double> phi;
    std::string plan_path;
    std::string write_plan_path;
    bool degrees = false;
    std::string out;
    bool satisfied = true;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("check-cover", "verify a covering assumption");
        src.add_to(c);
        auto* p = c->add_option("--phi", phi, "isosceles cover base angle");
        auto* f = c->add_option("--plan", plan_path, "cover plan file, checked against the general conditions");
        p->excludes(f);
        f->excludes(p);
        c->add_option("--write-plan", write_plan_path, "write the plan derived from --phi");
        c->add_flag("--deg", degrees, "angles in degrees");
        c->add_option("-o,--output", out, "report file; stdout when omitted");
        c->callback([this] { run(); });
    }

    void run() {
        const auto m = src.load();
        json j;
        j["config"] = src.describe();
        if (phi) {
            const double ph = to_radians(*phi, degrees);
            j["config"]["phi"] = ph;
            const auto iso = verify_assumption_isosceles(m, ph);
            const auto plan = derive_cover_isosceles(m, ph);
            const auto gen = verify_assumption_general(m, plan);
            if (!write_plan_path.empty()) write_plan(plan, write_plan_path);
            j["covers"] = plan.covers.size();
            j["params"] = params_json(plan.params);
            j["satisfied"] = iso.satisfied;
            j["isosceles"] = report_json(iso);
            j["general"] = report_json(gen);
            const auto val = vertex_valence_bound_check(m, plan);
            j["valence"] = {{"ok", val.ok}, {"bound", val.bound}, {"max_count", val.max_count}};
            satisfied = iso.satisfied;
        } else if (!plan_path.empty()) {
            if (!write_plan_path.empty()) throw UsageError("--write-plan needs --phi");
            const auto plan = read_plan(plan_path);
            j["config"]["plan"] = plan_path;
            const auto gen = verify_assumption_general(m, plan);
            j["covers"] = plan.covers.size();
            j["params"] = params_json(plan.params);
            j["satisfied"] = gen.satisfied;
            j["general"] = report_json(gen);
            satisfied = gen.satisfied;
        } else {
            throw UsageError("one of --phi or --plan is required");
        }
        emit(j, out);
    }
};

struct InterpErrorCmd {
    MeshSource src;
    double phi = 0.6;
    bool degrees = false;
    std::string field = "quartic";
    int degree = 6;
    bool force = false;
    std::string out;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("interp-error", "H1 errors of Lagrange and cover-based interpolation");
        src.add_to(c);
        c->add_option("--phi", phi, "isosceles cover base angle")->capture_default_str();
        c->add_flag("--deg", degrees, "angles in degrees");
        c->add_option("--field", field, "quartic | linear | quadratic")
            ->check(CLI::IsMember({"quartic", "linear", "quadratic"}))
            ->capture_default_str();
        c->add_option("--degree", degree, "quadrature degree")->capture_default_str();
        c->add_flag("--force", force, "interpolate even if the covers fail the check");
        c->add_option("-o,--output", out, "report file; stdout when omitted");
        c->callback([this] { run(); });
    }

    void run() {
        const auto m = src.load();
        const auto u = field_named(field);
        const auto q = quadrature_rule(degree);
        const double ph = to_radians(phi, degrees);
        PiStarOptions opt;
        opt.force = force;
        const auto plan = derive_cover_isosceles(m, ph);
        const double h = mesh_h(m);
        const double e1 = h1_seminorm_diff(m, u, lagrange_nodal(u, m), q);
        const double es = h1_seminorm_diff(m, u, pi_star_nodal(u, m, plan, opt), q);
        const double h2 = h2_seminorm(u, m, q);
        json j;
        j["config"] = src.describe();
        j["config"]["phi"] = ph;
        j["config"]["field"] = field;
        j["config"]["degree"] = degree;
        j["covers"] = plan.covers.size();
        j["h"] = h;
        j["error_pi1"] = e1;
        j["error_pistar"] = es;
        j["h2_seminorm"] = h2;
        j["ratio"] = h2 > 0 ? json(es / (h * h2)) : json(nullptr);
        emit(j, out);
    }
};

struct SolveCmd {
    MeshSource src;
    int degree = 6;
    double rel_tol = 1e-12;
    std::size_t max_iter = 0;
    std::string values_path;
    std::string out;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("solve", "P1 solve with exact solution x(1-x)y(1-y)");
        src.add_to(c);
        c->add_option("--degree", degree, "quadrature degree")->capture_default_str();
        c->add_option("--rel-tol", rel_tol, "CG relative residual")->capture_default_str();
        c->add_option("--max-iter", max_iter, "CG iteration limit, 0 for 10 n + 100")->capture_default_str();
        c->add_option("--values", values_path, "write nodal values, one per line");
        c->add_option("-o,--output", out, "report file; stdout when omitted");
        c->callback([this] { run(); });
    }

    void run() {
        const auto m = src.load();
        const auto q = quadrature_rule(degree);
        const auto sys = assemble(m, fields::quartic_bubble_load(), q);
        const auto sol = solve_cg(sys, {rel_tol, max_iter});
        const double h = mesh_h(m);
        const double eh = fem_h1_error(m, fields::quartic_bubble(), sol, q);
        if (!values_path.empty()) {
            std::ofstream f(values_path);
            if (!f) throw IoError("cannot open '" + values_path + "' for writing");
            for (double v : sol.u.values) f << text::format_shortest(v) << '\n';
        }
        json j;
        j["config"] = src.describe();
        j["config"]["degree"] = degree;
        j["config"]["rel_tol"] = rel_tol;
        j["config"]["max_iter"] = max_iter;
        j["h"] = h;
        j["e_h"] = eh;
        j["e_h_over_h"] = eh / h;
        j["unknowns"] = sys.unknowns();
        j["iterations"] = sol.iterations;
        j["relative_residual"] = sol.relative_residual;
        emit(j, out);
    }
};

struct Table1Cmd {
    std::vector<int> Ks{10, 20, 40, 80, 160};
    std::vector<double> alphas{0.1, 0.01, 0.0001};
    std::string reference;
    std::string format = "csv";
    unsigned jobs = 1;
    int degree = 6;
    double rel_tol = 1e-12;
    std::string out;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("table1", "convergence table on the six-triangle meshes");
        c->add_option("--K", Ks, "cells per side")->delimiter(',')->capture_default_str();
        c->add_option("--alpha", alphas, "apex height ratios")->delimiter(',')->capture_default_str();
        c->add_option("--reference", reference, "compare with stored reference values")
            ->check(CLI::IsMember({"table1"}));
        c->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
        c->add_option("--jobs", jobs, "cells computed in parallel")->capture_default_str();
        c->add_option("--degree", degree, "quadrature degree")->capture_default_str();
        c->add_option("--rel-tol", rel_tol, "CG relative residual")->capture_default_str();
        c->add_option("-o,--output", out, "output file; stdout when omitted");
        c->callback([this] { run(); });
    }

    void run() {
        ExperimentOptions opt;
        opt.jobs = jobs;
        opt.quadrature_degree = degree;
        opt.solver.rel_tol = rel_tol;
        const auto rows = run_experiment(Ks, alphas, opt);
        const bool compare = !reference.empty();
        std::ostringstream s;
        json j;
        j["config"] = {{"K", Ks}, {"alpha", alphas}, {"degree", degree}, {"rel_tol", rel_tol}, {"jobs", jobs}};
        j["rows"] = json::array();
        if (format == "csv") {
            s << "K,alpha,h,e_h,e_h_over_h";
            if (compare) s << ",ref_e_h,rel_dev_e_h,ref_e_h_over_h,abs_dev_e_h_over_h";
            s << '\n';
        }
        double max_rel = 0.0, max_ratio = 0.0;
        std::vector<std::string> notes;
        for (const auto& r : rows) {
            const auto* ref = compare ? reference::find_table1(r.K, r.alpha) : nullptr;
            json row{{"K", r.K}, {"alpha", r.alpha}, {"h", r.h}, {"e_h", r.e_h}, {"e_h_over_h", r.e_h_over_h},
                     {"unknowns", r.unknowns}, {"iterations", r.iterations}, {"relative_residual", r.relative_residual}};
            if (format == "csv") {
                s << r.K << ',' << text::format_shortest(r.alpha) << ',' << fixed_sig(r.h, "%.5g") << ','
                  << fixed_sig(r.e_h, "%.4e") << ',' << fixed_sig(r.e_h_over_h, "%.5f");
            }
            if (compare && ref) {
                const auto d = reference::compare_table1(*ref, r.e_h, r.e_h_over_h);
                max_rel = std::max(max_rel, d.e_h_rel);
                double ratio_dev = d.ratio_abs;
                if (ref->e_h_over_h_trend) {
                    const char* closer = !d.ratio_matches_printed && !d.ratio_matches_trend ? "neither"
                                         : d.ratio_abs <= d.ratio_abs_trend                 ? "printed"
                                                                                            : "trend";
                    std::ostringstream n;
                    n << "K=" << r.K << " alpha=" << text::format_shortest(r.alpha) << ": e_h/h "
                      << fixed_sig(r.e_h_over_h, "%.5f") << " vs printed " << fixed_sig(ref->e_h_over_h, "%.5f")
                      << " (dev " << fixed_sig(d.ratio_abs, "%.1e") << ") and trend "
                      << fixed_sig(*ref->e_h_over_h_trend, "%.5f") << " (dev " << fixed_sig(d.ratio_abs_trend, "%.1e")
                      << "); closer to " << closer;
                    notes.push_back(n.str());
                    row["ratio_matched"] = closer;
                } else {
                    max_ratio = std::max(max_ratio, ratio_dev);
                }
                row["ref_e_h"] = ref->e_h;
                row["rel_dev_e_h"] = d.e_h_rel;
                row["ref_e_h_over_h"] = ref->e_h_over_h;
                row["abs_dev_e_h_over_h"] = ratio_dev;
                if (format == "csv") {
                    s << ',' << fixed_sig(ref->e_h, "%.4e") << ',' << fixed_sig(d.e_h_rel, "%.2e") << ','
                      << fixed_sig(ref->e_h_over_h, "%.5f") << ',' << fixed_sig(ratio_dev, "%.2e");
                }
            } else if (compare && format == "csv") {
                s << ",,,,";
            }
            if (format == "csv") s << '\n';
            j["rows"].push_back(row);
        }
        if (compare) {
            j["max_rel_dev_e_h"] = max_rel;
            j["max_abs_dev_e_h_over_h"] = max_ratio;
            j["notes"] = notes;
            if (format == "csv") {
                s << "# max relative deviation e_h: " << fixed_sig(max_rel, "%.3e") << '\n';
                s << "# max absolute deviation e_h/h (flagged cell excluded): " << fixed_sig(max_ratio, "%.3e") << '\n';
                for (const auto& n : notes) s << "# " << n << '\n';
            }
        }
        if (format == "json") {
            emit(j, out);
            return;
        }
        if (out.empty()) {
            std::cout << s.str();
        } else {
            std::ofstream f(out);
            if (!f) throw IoError("cannot open '" + out + "' for writing");
            f << s.str();
        }
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thin-element P1 finite elements: meshes, quality, covers, interpolation, Poisson"};
    app.require_subcommand(1);
    GenCmd gen;
    ClassifyCmd cls;
    CheckCoverCmd chk;
    InterpErrorCmd interp;
    SolveCmd solve;
    Table1Cmd table;
    gen.add(app);
    cls.add(app);
    chk.add(app);
    interp.add(app);
    solve.add(app);
    table.add(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidParam& e) {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return chk.satisfied ? 0 : kExitFailure;
}
