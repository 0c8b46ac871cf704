#include "opideal/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "opideal/amenable.hpp"
#include "opideal/classical.hpp"
#include "opideal/errors.hpp"
#include "opideal/factor.hpp"
#include "opideal/harish.hpp"
#include "opideal/io.hpp"
#include "opideal/nest.hpp"
#include "opideal/symfunc.hpp"

namespace opideal::cli {

namespace {

using io::json;

std::string shortest(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json reals(std::span<const double> xs)
{
    json out = json::array();
    for (double x : xs) out.push_back(io::real_to_json(x));
    return out;
}

json complex_list(const std::vector<Complex>& xs)
{
    json out = json::array();
    for (const auto& x : xs) out.push_back({x.real(), x.imag()});
    return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require_path(const std::string& path, const char* option)
{
    if (path.empty())
        throw Error(ErrorCode::Schema, std::string("missing required option ") + option);
}

CMatrix load_matrix(const std::string& path, const char* option = "--matrix")
{
    require_path(path, option);
    return io::matrix_from_json(io::read_json_file(path));
}

Flag load_flag(const RunConfig& c, int n)
{
    if (c.flag.empty()) return Flag::standard(n);
    Flag f = io::flag_from_json(io::read_json_file(c.flag));
    if (f.dim() != n)
        throw Error(ErrorCode::DimensionMismatch, "flag dimension does not match the matrix", f.dim());
    return f;
}

Partition load_partition(const RunConfig& c, const Flag& flag)
{
    if (c.cuts.empty()) return Partition::finest(flag);
    return Partition(flag, c.cuts);
}

FiniteGroup load_group(const RunConfig& c)
{
    if (!c.group_file.empty()) return io::group_from_json(io::read_json_file(c.group_file));
    return group_by_name(c.group);
}

std::pair<ClassicalType, StructureData> load_structure(const RunConfig& c, int n)
{
    if (!c.structure.empty()) {
        auto st = io::structure_from_json(io::read_json_file(c.structure));
        if (st.second.n != n)
            throw Error(ErrorCode::DimensionMismatch, "structure dimension does not match the matrix",
                        st.second.n);
        return st;
    }
    const auto type = parse_classical_type(c.type);
    std::optional<Signature> sig;
    if (c.split) sig = Signature{c.split->first, c.split->second};
    return {type, StructureData::standard(type, n, sig)};
}

double relative(double num, double den) { return num / std::max(den, 1e-300); }

// ---- subcommands ---------------------------------------------------------

std::string cmd_svalues(const RunConfig& c)
{
    const auto s = singular_values(load_matrix(c.matrix));
    if (c.format == "csv") {
        std::string out;
        for (double v : s.values()) out += shortest(v) + "\n";
        return out;
    }
    return dump({{"singular_values", reals(s.values())}});
}

std::string cmd_norm(const RunConfig& c)
{
    const auto phi = SymNormFunc::parse(c.phi);
    const CMatrix t = load_matrix(c.matrix);
    return dump({{"phi", phi.name()},
                 {"norm", phi_norm(phi, t)},
                 {"adjoint_norm", phi_norm(phi, t.adjoint())},
                 {"operator_norm", op_norm(t)}});
}

std::string cmd_dualnorm(const RunConfig& c)
{
    const auto phi = SymNormFunc::parse(c.phi);
    require_path(c.sequence, "--sequence");
    const auto eta = NonincreasingSequence::rearranged(io::parse_sequence_csv(io::read_text_file(c.sequence)));
    DualSearchOptions opts;
    opts.restarts = c.restarts;
    opts.seed = c.seed;
    if (c.tol) opts.tolerance = *c.tol;
    const auto est = adjoint_phi_eval(phi, eta, opts);
    json report{{"phi", phi.name()},
                {"estimate", est.estimate},
                {"maximizer", reals(est.maximizer)},
                {"agrees", est.agrees}};
    report["closed_form"] = est.closed_form ? json(*est.closed_form) : json(nullptr);
    return dump(report);
}

std::string cmd_boyd(const RunConfig& c)
{
    const auto phi = SymNormFunc::parse(c.phi);
    const auto est = boyd_estimate(phi, c.m_max, c.seq_len, c.jobs);
    return dump({{"phi", phi.name()},
                 {"p_hat", io::real_to_json(est.p_hat)},
                 {"q_hat", io::real_to_json(est.q_hat)},
                 {"m_max", est.m_max},
                 {"seq_len", est.seq_len},
                 {"dilation_norms", reals(est.dilation_norms)},
                 {"contraction_norms", reals(est.contraction_norms)}});
}

std::string cmd_truncate(const RunConfig& c)
{
    const CMatrix x = load_matrix(c.matrix);
    const Flag flag = load_flag(c, static_cast<int>(x.rows()));
    const Partition p = load_partition(c, flag);
    const CMatrix d = truncate_diag(p, x), u = truncate_upper(p, x), l = truncate_lower(p, x);
    return dump({{"cuts", std::vector<int>(p.cuts().begin(), p.cuts().end())},
                 {"diag", io::matrix_to_json(d)},
                 {"upper", io::matrix_to_json(u)},
                 {"lower", io::matrix_to_json(l)},
                 {"sum_residual", (d + u + l - x).norm()}});
}

std::string cmd_integral(const RunConfig& c)
{
    const CMatrix x = load_matrix(c.matrix);
    const Flag flag = load_flag(c, static_cast<int>(x.rows()));
    const auto parts = triangular_integral(flag, x);
    const auto adj = triangular_integral(flag, x.adjoint());
    const double adjoint_residual = std::max((adj.lower - parts.upper.adjoint()).norm(),
                                             (adj.diag - parts.diag.adjoint()).norm());
    return dump({{"lower", io::matrix_to_json(parts.lower)},
                 {"diag", io::matrix_to_json(parts.diag)},
                 {"upper", io::matrix_to_json(parts.upper)},
                 {"sum_residual", (parts.lower + parts.diag + parts.upper - x).norm()},
                 {"adjoint_residual", adjoint_residual}});
}

std::string cmd_ldl(const RunConfig& c)
{
    const CMatrix a = load_matrix(c.matrix);
    const Flag flag = load_flag(c, static_cast<int>(a.rows()));
    const Partition p = load_partition(c, flag);
    const auto f = ldl_nest(a, p);
    return dump({{"r", io::matrix_to_json(f.r)},
                 {"d", io::matrix_to_json(f.d)},
                 {"residual", relative((f.reconstruct() - a).norm(), a.norm())},
                 {"nilpotency_index", nilpotency_check(f.r, p)},
                 {"block_count", p.block_count()}});
}

std::string cmd_qr(const RunConfig& c)
{
    const CMatrix g = load_matrix(c.matrix);
    const Flag flag = load_flag(c, static_cast<int>(g.rows()));
    const auto f = qb_nest(g, flag);
    return dump({{"u", io::matrix_to_json(f.u)},
                 {"b", io::matrix_to_json(f.b)},
                 {"residual", relative((f.u * f.b - g).norm(), g.norm())},
                 {"unitarity_defect", unitarity_defect(f.u)},
                 {"in_nest_algebra", is_in_nest_algebra(f.b, flag, 1e-12)}});
}

std::string cmd_cartan(const RunConfig& c)
{
    const CMatrix g = load_matrix(c.matrix);
    const auto [type, s] = load_structure(c, static_cast<int>(g.rows()));
    const double tol = c.tol.value_or(1e-8);
    const auto f = cartan_decompose(g, type, s, tol);
    return dump({{"type", to_string(type)},
                 {"k", io::matrix_to_json(f.k)},
                 {"x", io::matrix_to_json(f.x)},
                 {"residual", relative((f.k * exp_hermitian(f.x) - g).norm(), g.norm())},
                 {"k_unitarity_defect", unitarity_defect(f.k)},
                 {"k_in_group", group_membership(f.k, type, s, tol)},
                 {"x_in_algebra", algebra_membership(f.x, type, s, tol)}});
}

std::string cmd_iwasawa(const RunConfig& c)
{
    const CMatrix g = load_matrix(c.matrix);
    std::optional<CMatrix> x0;
    if (!c.x0.empty()) x0 = load_matrix(c.x0, "--x0");
    const auto f = iwasawa_decompose(g, x0);
    return dump({{"k", io::matrix_to_json(f.k)},
                 {"a", io::matrix_to_json(f.a)},
                 {"n", io::matrix_to_json(f.n)},
                 {"x0", io::matrix_to_json(f.x0)},
                 {"residual", relative((f.k * f.a * f.n - g).norm(), g.norm())},
                 {"k_unitarity_defect", unitarity_defect(f.k)},
                 {"a_commutator", (f.a * f.x0 - f.x0 * f.a).norm()}});
}

std::string cmd_hc(const RunConfig& c)
{
    const CMatrix g = load_matrix(c.matrix);
    if (!c.split) throw Error(ErrorCode::Schema, "missing required option --split");
    const BlockSplit split{c.split->first, c.split->second};
    const auto f = hc_factorize(g, split);
    json report{{"z_plus", io::matrix_to_json(f.z_plus)},
                {"kappa", io::matrix_to_json(f.kappa)},
                {"z_minus", io::matrix_to_json(f.z_minus)},
                {"residual", relative((f.reconstruct() - g).norm(), g.norm())}};
    if (!c.z.empty()) {
        const CMatrix z = load_matrix(c.z, "--z");
        const bool inside = hc_domain_test(g, z, split);
        report["in_domain"] = inside;
        if (inside) {
            report["action"] = io::matrix_to_json(hc_action(g, z, split));
            report["cocycle"] = io::matrix_to_json(hc_cocycle(g, z, split));
        }
    }
    return dump(report);
}

std::string cmd_mean(const RunConfig& c)
{
    const auto g = load_group(c);
    const auto m = invariant_means(g);
    json means = json::array();
    for (const auto& mu : m.means) means.push_back(io::functional_to_json(mu));
    return dump({{"order", g.order()},
                 {"means", means},
                 {"constraint_rank", m.constraint_rank},
                 {"unique", m.unique},
                 {"residual", m.residual}});
}

std::string cmd_gns(const RunConfig& c)
{
    const auto g = load_group(c);
    const Functional mu = c.mu.empty() ? Functional::uniform(g)
                                       : io::functional_from_json(io::read_json_file(c.mu));
    const auto rep = gns_regular(g, mu);
    const auto chi = rep.character();
    bool regular = true;
    for (int x = 0; x < g.order(); ++x) {
        const double expected = x == g.identity() ? g.order() : 0.0;
        regular = regular && std::abs(chi[x] - expected) < 1e-9;
    }
    return dump({{"order", g.order()},
                 {"dim", rep.dim()},
                 {"character", complex_list(chi)},
                 {"regular_character", regular},
                 {"trivial", triviality_test(g, mu)}});
}

std::string cmd_arens(const RunConfig& c)
{
    const auto g = load_group(c);
    require_path(c.mu, "--mu");
    require_path(c.nu, "--nu");
    const auto mu = io::functional_from_json(io::read_json_file(c.mu));
    const auto nu = io::functional_from_json(io::read_json_file(c.nu));
    const auto prod = arens_product(g, mu, nu);
    return dump({{"product", io::functional_to_json(prod)}});
}

std::string cmd_growth(const RunConfig& c)
{
    const auto phi = SymNormFunc::parse(c.phi);
    const auto rows = truncation_norm_experiment(phi, c.sizes, c.trials, c.seed, c.jobs);
    if (c.format == "json") {
        json out = json::array();
        for (const auto& r : rows) out.push_back({{"n", r.n}, {"ratio", r.ratio}});
        return dump({{"phi", phi.name()}, {"seed", c.seed}, {"trials", c.trials}, {"rows", out}});
    }
    std::string csv = "n,ratio\n";
    for (const auto& r : rows) csv += std::to_string(r.n) + "," + shortest(r.ratio) + "\n";
    return csv;
}

using Handler = std::function<std::string(const RunConfig&)>;

const std::map<std::string, Handler>& handlers()
{
    static const std::map<std::string, Handler> table{
        {"svalues", cmd_svalues},   {"norm", cmd_norm},       {"dualnorm", cmd_dualnorm},
        {"boyd", cmd_boyd},         {"truncate", cmd_truncate}, {"integral", cmd_integral},
        {"ldl-nest", cmd_ldl},      {"qr-nest", cmd_qr},       {"cartan", cmd_cartan},
        {"iwasawa", cmd_iwasawa},   {"hc", cmd_hc},           {"mean", cmd_mean},
        {"gns", cmd_gns},           {"arens", cmd_arens},
        {"experiment truncation-growth", cmd_growth},
    };
    return table;
}

std::string error_report(const std::string& code, const std::string& message,
                         std::optional<double> quantity)
{
    json err{{"code", code}, {"message", message}};
    err["quantity"] = quantity ? io::real_to_json(*quantity) : json(nullptr);
    return dump({{"error", err}});
}

std::optional<std::pair<int, int>> parse_split(const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::Schema, "--split must look like p,q");
    try {
        return std::make_pair(std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1)));
    } catch (const std::exception&) {
        throw Error(ErrorCode::Schema, "--split must look like p,q");
    }
}

} // namespace

std::uint64_t default_seed()
{
    if (const char* env = std::getenv("OPIDEAL_SEED")) {
        std::uint64_t v = 0;
        const std::string s(env);
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
    }
    return kDefaultSeed;
}

const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names{
        "svalues", "norm",    "dualnorm", "boyd", "truncate", "integral", "ldl-nest", "qr-nest",
        "cartan",  "iwasawa", "hc",       "mean", "gns",      "arens",    "experiment"};
    return names;
}

RunResult dispatch(const RunConfig& config)
{
    const auto& table = handlers();
    const auto it = table.find(config.subcommand);
    if (it == table.end())
        return {2, error_report("unknown_subcommand", "unknown subcommand '" + config.subcommand + "'", {}),
                "error: unknown subcommand '" + config.subcommand + "'"};
    if (config.format != "json" && config.format != "csv")
        return {1, error_report("schema", "--format must be json or csv", {}), "error: bad --format"};
    try {
        return {0, it->second(config), {}};
    } catch (const Error& e) {
        return {1, error_report(to_string(e.code()), e.what(), e.quantity()), std::string("error: ") + e.what()};
    } catch (const std::exception& e) {
        return {1, error_report("internal", e.what(), {}), std::string("error: ") + e.what()};
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    cfg.seed = default_seed();
    std::string split_text;

    CLI::App app{"Operator-ideal and matrix-group decomposition toolkit", "opideal"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output", cfg.output, "Write the report to this file instead of stdout");
        sub->add_option("--format", cfg.format, "Report format: json or csv");
    };
    auto add_phi = [&](CLI::App* sub) {
        sub->add_option("--phi", cfg.phi, "Norming function: schatten:<p>, schatten:inf or kyfan:<k>")
            ->capture_default_str();
    };
    auto add_matrix = [&](CLI::App* sub, const char* what) {
        sub->add_option("--matrix", cfg.matrix, what)->required();
    };
    auto add_flag = [&](CLI::App* sub) {
        sub->add_option("--flag", cfg.flag, "Flag JSON {basis, dims}; default: standard maximal flag");
    };
    auto add_cuts = [&](CLI::App* sub) {
        sub->add_option("--cuts", cfg.cuts, "Partition cuts, comma separated, ending at n")->delimiter(',');
    };
    auto add_group = [&](CLI::App* sub) {
        sub->add_option("--group", cfg.group, "Built-in group: trivial, z<n>, d<n>, s3, s4, q8")
            ->capture_default_str();
        sub->add_option("--group-file", cfg.group_file, "Group JSON {order, table, labels}");
    };

    auto* sv = app.add_subcommand("svalues", "Singular values s_j(T), sorted nonincreasing");
    add_matrix(sv, "Matrix JSON");
    add_common(sv);

    auto* norm = app.add_subcommand("norm", "Norm ||T||_Phi = Phi(s_1(T), s_2(T), ...)");
    add_phi(norm);
    add_matrix(norm, "Matrix JSON");
    add_common(norm);

    auto* dual = app.add_subcommand(
        "dualnorm", "Adjoint function Phi*(eta) = sup <xi, eta> / Phi(xi) over sorted xi >= 0");
    add_phi(dual);
    dual->add_option("--sequence", cfg.sequence, "Sequence CSV, one nonnegative real per line")->required();
    dual->add_option("--restarts", cfg.restarts, "Random restarts of the ascent")->capture_default_str();
    dual->add_option("--tol", cfg.tol, "Relative agreement tolerance with the closed form");
    dual->add_option("--seed", cfg.seed, "Seed for the random restarts");
    add_common(dual);

    auto* boyd = app.add_subcommand(
        "boyd", "Boyd indices: sup log m / log||D_m|| and inf log(1/m) / log||D_{1/m}||");
    add_phi(boyd);
    boyd->add_option("--mmax", cfg.m_max, "Largest dilation factor scanned")->capture_default_str();
    boyd->add_option("--seqlen", cfg.seq_len, "Length cap of test sequences")->capture_default_str();
    boyd->add_option("--jobs", cfg.jobs, "Threads for the scan over m")->capture_default_str();
    add_common(boyd);

    auto* trunc = app.add_subcommand(
        "truncate", "Truncations D_P, U_P, L_P: block diagonal, strictly upper, strictly lower parts");
    add_matrix(trunc, "Matrix JSON");
    add_flag(trunc);
    add_cuts(trunc);
    add_common(trunc);

    auto* integral = app.add_subcommand(
        "integral", "Triangular integral: truncations at the finest partition, X = L + D + U");
    add_matrix(integral, "Matrix JSON");
    add_flag(integral);
    add_common(integral);

    auto* ldl = app.add_subcommand(
        "ldl-nest", "Nest factorization a = (1 + r) d (1 + r*) of a positive definite matrix");
    add_matrix(ldl, "Hermitian positive definite matrix JSON");
    add_flag(ldl);
    add_cuts(ldl);
    add_common(ldl);

    auto* qr = app.add_subcommand(
        "qr-nest", "Factorization g = u b with u unitary and b in the nest algebra");
    add_matrix(qr, "Invertible matrix JSON");
    add_flag(qr);
    add_common(qr);

    auto* cartan = app.add_subcommand(
        "cartan", "Cartan decomposition g = k exp(X), X = log(g* g) / 2, k unitary");
    add_matrix(cartan, "Group element JSON");
    cartan->add_option("--type", cfg.type, "Classical type: A B C AI AII AIII BI BII CI CII")
        ->capture_default_str();
    cartan->add_option("--split", split_text, "Signature p,q for AIII, BI, CII");
    cartan->add_option("--structure", cfg.structure, "Structure JSON {type, n, split}");
    cartan->add_option("--tol", cfg.tol, "Membership tolerance (default 1e-8)");
    add_common(cartan);

    auto* iwasawa = app.add_subcommand(
        "iwasawa", "Iwasawa decomposition g = k a n along the eigenflag of a regular X0");
    add_matrix(iwasawa, "Invertible matrix JSON");
    iwasawa->add_option("--x0", cfg.x0, "Regular Hermitian element JSON; default diag(n, ..., 1)");
    add_common(iwasawa);

    auto* hc = app.add_subcommand(
        "hc", "Block factorization g = [[1, Z+], [0, 1]] diag(A - B D^-1 C, D) [[1, 0], [Z-, 1]]");
    add_matrix(hc, "Matrix JSON");
    hc->add_option("--split", split_text, "Block sizes p,q")->required();
    hc->add_option("--z", cfg.z, "Point Z (p x q matrix JSON) for the action and cocycle");
    add_common(hc);

    auto* mean = app.add_subcommand("mean", "Invariant means: mu(L_x psi) = mu(psi), mu >= 0, mu(1) = 1");
    add_group(mean);
    add_common(mean);

    auto* gns = app.add_subcommand(
        "gns", "Regular representation on the GNS space of (psi, chi) -> mu(psi chi*)");
    add_group(gns);
    gns->add_option("--mu", cfg.mu, "Mean JSON {weights}; default uniform");
    add_common(gns);

    auto* arens = app.add_subcommand(
        "arens", "Product <mu . nu, psi> = <mu, nu . psi>, (nu . psi)(x) = <nu, L_x psi>");
    add_group(arens);
    arens->add_option("--mu", cfg.mu, "Functional JSON {weights}")->required();
    arens->add_option("--nu", cfg.nu, "Functional JSON {weights}")->required();
    add_common(arens);

    auto* experiment = app.add_subcommand("experiment", "Seeded numerical experiments");
    experiment->require_subcommand(1);
    auto* growth = experiment->add_subcommand(
        "truncation-growth", "Largest ||U(X)||_Phi / ||X||_Phi over random rank-one X per size");
    add_phi(growth);
    growth->add_option("--sizes", cfg.sizes, "Dimensions, comma separated")->delimiter(',');
    growth->add_option("--trials", cfg.trials, "Trials per dimension")->capture_default_str();
    growth->add_option("--seed", cfg.seed, "Seed (default from OPIDEAL_SEED or built-in)");
    growth->add_option("--jobs", cfg.jobs, "Threads")->capture_default_str();
    growth->add_option("--output", cfg.output, "Write the report to this file instead of stdout");
    growth->add_option("--format", cfg.format, "csv (default) or json");

    // Unknown subcommands exit with status 2 before CLI11 reports them as extras.
    if (argc > 1) {
        const std::string first = argv[1];
        const auto& known = subcommands();
        if (!first.empty() && first[0] != '-' &&
            std::find(known.begin(), known.end(), first) == known.end()) {
            RunConfig unknown;
            unknown.subcommand = first;
            const auto r = dispatch(unknown);
            out << r.report;
            err << r.diagnostic << "\n";
            return r.status;
        }
    }

    bool growth_selected = false;
    growth->callback([&] { growth_selected = true; });
    const bool format_given_for_growth = [&] {
        for (int i = 1; i < argc; ++i)
            if (std::string(argv[i]).rfind("--format", 0) == 0) return true;
        return false;
    }();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        const bool missing_sub = dynamic_cast<const CLI::RequiredError*>(&e) != nullptr &&
                                 app.get_subcommands().empty();
        out << error_report(missing_sub ? "unknown_subcommand" : "schema", e.what(), {});
        err << "error: " << e.what() << "\n";
        return missing_sub ? 2 : 1;
    }

    for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
    if (growth_selected) {
        cfg.subcommand = "experiment truncation-growth";
        if (!format_given_for_growth) cfg.format = "csv";
    }
    if (!split_text.empty()) {
        try {
            cfg.split = parse_split(split_text);
        } catch (const Error& e) {
            out << error_report("schema", e.what(), {});
            err << "error: " << e.what() << "\n";
            return 1;
        }
    }

    const auto result = dispatch(cfg);
    if (result.status == 0 && !cfg.output.empty()) {
        try {
            io::write_text_file(cfg.output, result.report);
        } catch (const Error& e) {
            out << error_report(to_string(e.code()), e.what(), {});
            err << "error: " << e.what() << "\n";
            return 1;
        }
    } else {
        out << result.report;
    }
    if (!result.diagnostic.empty()) err << result.diagnostic << "\n";
    return result.status;
}

} // namespace opideal::cli
