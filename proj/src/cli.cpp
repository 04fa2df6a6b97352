#include "npdisc/cli.hpp"

#include "npdisc/geometry.hpp"
#include "npdisc/kernels.hpp"
#include "npdisc/pick.hpp"
#include "npdisc/random.hpp"
#include "npdisc/sequences.hpp"
#include "npdisc/tangential.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace npdisc::cli {

namespace {

using geometry::cd;

const std::vector<RecipeInfo>& recipe_table()
{
    static const std::vector<RecipeInfo> table{
        {"classify",
         "Kernel weights, renewal moduli, first moment mu, limit of a_n, ratio and strict-cyclicity suprema, "
         "complete Pick test and compact-regime flag for one kernel family.",
         "single row",
         {{"family", "hardy", "kernel family: hardy, hs:<s>, geom:<q> or custom:<moduli.csv>"},
          {"N", "256", "truncation length"}}},
        {"compare",
         "Observed range and tail drift of a_n / a'_n for two kernel families (a heuristic comparability verdict).",
         "single row",
         {{"a", "hardy", "first kernel family"},
          {"b", "hs:-0.5", "second kernel family"},
          {"N", "256", "truncation length"}}},
        {"pick-check",
         "Random Pick problems: minimum eigenvalue, scale and positivity verdict of [(1 - w_i conj w_j) K(z_i, z_j)].",
         "trial (or i, j when dumping)",
         {{"family", "drury-arveson", "drury-arveson (ball nodes) or a kernel family (disc nodes)"},
          {"d", "2", "ball dimension for drury-arveson nodes"},
          {"m", "8", "nodes per problem"},
          {"trials", "20", "number of random problems"},
          {"radius", "0.9", "node radius bound"},
          {"target_radius", "0.9", "target modulus bound"},
          {"dump", "false", "true: write the first Pick matrix as i,j,re,im instead"}}},
        {"interp-extract",
         "Greedy subsequence whose nested Pick matrices stay positive definite for all targets with |w_i| <= r.",
         "k",
         {{"tag", "wn_gaussian", "named sequence: vn_quadratic, wn_gaussian, dyadic_separated, xn_alternating"},
          {"N", "12", "sequence length (generations for dyadic_separated)"},
          {"r", "0.5", "target radius"},
          {"k_max", "10", "number of indices to select (<= 50)"}}},
        {"crossing",
         "2x2 Pick determinant at f(1 - x), f(-1 + s x) for the self-crossing-free map f(z) = (z^2, b(z)^2)/sqrt 2 "
         "with the inverse-map targets divided by C.",
         "single row",
         {{"r", "0.5", "zero of the Blaschke factor b"},
          {"C", "2", "candidate multiplier norm (> 1)"},
          {"x", "1e-4", "distance of the nodes from +-1"}}},
        {"distortion",
         "Pseudohyperbolic distances before and after a disc map into the ball.",
         "pair order",
         {{"map", "crossing", "crossing, tangential or a kernel family (its disc embedding)"},
          {"r", "0.5", "parameter of the crossing map"},
          {"pairs", "crossing", "crossing: (1 - x, -1 + s x) for x = 10^-1 .. 10^-digits; random: uniform pairs"},
          {"digits", "4", "number of crossing pairs"},
          {"count", "100", "number of random pairs"}}},
        {"carleson",
         "Carleson box ratios 2^p sum (1 - |v|) over S([0, 2^-p)).",
         "p",
         {{"tag", "dyadic_separated", "named sequence"},
          {"N", "0", "sequence length; 0 picks enough terms for p_max"},
          {"p_max", "10", "largest box exponent"}}},
        {"separation",
         "Strong separation products delta_n, nearest-neighbour gaps and interpolation budgets "
         "delta_n (1 + log 1/delta_n)^-2.",
         "n",
         {{"tag", "vn_quadratic", "named sequence"}, {"N", "50", "sequence length"}}},
        {"tangential-embed",
         "Boundary data of a proper disc embedding into the 2-ball that meets the sphere tangentially: "
         "u1 = log sqrt(1 - |f1|^2), its conjugate and the sphere defect.",
         "t",
         {{"m", "4096", "grid size (power of two >= 256)"}, {"r", "0.75", "clip radius in (2/3, 1)"}}},
        {"tangency-report",
         "Tangential approach ratios (1 - |F(x)|)/|F(1) - F(x)| and Re<F(1) - F(x), F(1)>/(1 - x) "
         "along x = 1 - 2^-j.",
         "x",
         {{"m", "4096", "grid size for the constructed embedding"},
          {"r", "0.75", "clip radius"},
          {"j_min", "4", "first exponent"},
          {"j_max", "14", "last exponent"},
          {"family", "construction", "construction, or a kernel family whose disc embedding is measured"}}},
    };
    return table;
}

const RecipeInfo* find_recipe(const std::string& name)
{
    for (const auto& r : recipe_table())
        if (r.name == name) return &r;
    return nullptr;
}

class Params {
public:
    Params(const RecipeInfo& info, const std::map<std::string, std::string>& given) : info_(info), given_(given)
    {
        for (const auto& [k, v] : given) {
            const bool known = std::any_of(info.params.begin(), info.params.end(),
                                           [&k](const ParamDoc& p) { return p.key == k; });
            if (!known) throw CliError(kMalformedParameter, "unknown parameter '" + k + "' for " + info.name);
        }
    }

    std::string str(const std::string& key) const
    {
        if (auto it = given_.find(key); it != given_.end()) return it->second;
        for (const auto& p : info_.params)
            if (p.key == key) return p.fallback;
        throw std::logic_error("undeclared parameter " + key);
    }

    double real(const std::string& key) const
    {
        const auto s = str(key);
        try {
            const double v = csv::parse_double(s);
            if (!std::isfinite(v)) throw csv::ParseError("non-finite");
            return v;
        } catch (const csv::ParseError&) {
            throw CliError(kMalformedParameter, "parameter " + key + "='" + s + "' is not a finite number");
        }
    }

    std::size_t count(const std::string& key) const
    {
        const auto s = str(key);
        std::size_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw CliError(kMalformedParameter, "parameter " + key + "='" + s + "' is not a nonnegative integer");
        return v;
    }

    bool flag(const std::string& key) const
    {
        const auto s = str(key);
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
        throw CliError(kMalformedParameter, "parameter " + key + "='" + s + "' is not a boolean");
    }

    std::map<std::string, std::string> effective() const
    {
        std::map<std::string, std::string> out;
        for (const auto& p : info_.params) out[p.key] = str(p.key);
        return out;
    }

private:
    const RecipeInfo& info_;
    const std::map<std::string, std::string>& given_;
};

std::string f(double x) { return csv::format_double(x); }
std::string b(bool x) { return x ? "true" : "false"; }

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<geometry::DiscPoint> disc_points(const sequences::DiscSequence& s)
{
    std::vector<geometry::DiscPoint> out;
    out.reserve(s.size());
    for (const auto& p : s.points()) out.push_back(p.point);
    return out;
}

geometry::BallPoint random_ball_point(CounterRng& rng, Eigen::Index d, double radius)
{
    geometry::Vec v(d);
    while (true) {
        for (Eigen::Index i = 0; i < d; ++i) v(i) = cd(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        if (v.norm() < 1.0) break;
    }
    return geometry::BallPoint(geometry::Vec(v * radius));
}

using RecipeFn = std::function<void(const Params&, std::uint64_t seed, csv::Table&)>;

void recipe_classify(const Params& p, std::uint64_t, csv::Table& t)
{
    const std::size_t N = p.count("N");
    const auto k = kernels::KernelHandle::parse(p.str("family"), N);
    t.header = kernels::report_csv_header();
    t.rows.push_back(kernels::report_csv_row(kernels::classify(k, N)));
}

void recipe_compare(const Params& p, std::uint64_t, csv::Table& t)
{
    const std::size_t N = p.count("N");
    const auto a = kernels::KernelHandle::parse(p.str("a"), N);
    const auto bb = kernels::KernelHandle::parse(p.str("b"), N);
    const auto c = kernels::are_comparable(a.weights(), bb.weights(), N);
    t.header = {"family_a", "family_b", "N", "ratio_min", "ratio_max", "tail_drift", "verdict", "heuristic"};
    t.rows.push_back({a.tag(), bb.tag(), std::to_string(N), f(c.ratio_min), f(c.ratio_max), f(c.tail_drift), c.verdict,
                      b(c.heuristic)});
}

void recipe_pick_check(const Params& p, std::uint64_t seed, csv::Table& t)
{
    const std::string family = p.str("family");
    const std::size_t m = p.count("m"), trials = p.count("trials"), d = p.count("d");
    const double radius = p.real("radius"), target_radius = p.real("target_radius");
    if (m < 1 || d < 1 || trials < 1) throw std::invalid_argument("pick-check: m, d and trials must be positive");
    if (!(radius > 0.0 && radius < 1.0 && target_radius >= 0.0 && target_radius < 1.0))
        throw std::invalid_argument("pick-check: radii must lie in [0, 1)");
    const bool dump = p.flag("dump");
    CounterRng rng(seed);

    const auto make = [&]() {
        std::vector<cd> targets(m);
        if (family == "drury-arveson") {
            std::vector<geometry::BallPoint> nodes;
            for (std::size_t i = 0; i < m; ++i) nodes.push_back(random_ball_point(rng, Eigen::Index(d), radius));
            for (auto& w : targets) w = rng.in_disc(target_radius);
            return pick::PickProblem::drury_arveson(std::move(nodes), std::move(targets));
        }
        const auto k = kernels::KernelHandle::parse(family);
        std::vector<cd> nodes(m);
        for (auto& z : nodes) z = rng.in_disc(std::min(radius, 0.999));
        for (auto& w : targets) w = rng.in_disc(target_radius);
        return pick::PickProblem::weighted(k, std::move(nodes), std::move(targets));
    };

    if (dump) {
        const auto a = pick::pick_matrix(make());
        t.header = {"i", "j", "re", "im"};
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                t.rows.push_back({std::to_string(i + 1), std::to_string(j + 1), f(a(i, j).real()), f(a(i, j).imag())});
        return;
    }
    t.header = {"trial", "m", "min_eigenvalue", "matrix_scale", "verdict", "solvable"};
    for (std::size_t trial = 1; trial <= trials; ++trial) {
        const auto problem = make();
        const auto v = pick::psd_check(pick::pick_matrix(problem));
        t.rows.push_back({std::to_string(trial), std::to_string(m), f(v.min_eigenvalue), f(v.matrix_scale),
                          pick::to_string(v.verdict), b(v.verdict != pick::Verdict::Indefinite)});
    }
}

void recipe_interp_extract(const Params& p, std::uint64_t seed, csv::Table& t)
{
    const auto seq = sequences::named_sequence(p.str("tag"), p.count("N"));
    pick::ExtractorOptions opt;
    opt.seed = seed;
    const auto res = pick::extract_interpolating_subsequence(disc_points(seq), p.real("r"), p.count("k_max"), opt);
    t.header = {"k", "index", "point_norm", "min_eigenvalue", "rule"};
    for (const auto& s : res.steps)
        t.rows.push_back({std::to_string(s.k), std::to_string(s.index + 1), f(s.point_norm), f(s.min_eigenvalue), s.rule});
    t.comments.push_back("index is the 1-based position in the " + seq.label() + " list");
}

void recipe_crossing(const Params& p, std::uint64_t, csv::Table& t)
{
    const double r = p.real("r"), C = p.real("C"), x = p.real("x");
    const auto c = pick::crossing_determinant(r, C, x);
    t.header = {"r", "C", "x", "s", "det", "lhs", "rhs", "kernel_ratio", "violated"};
    t.rows.push_back({f(r), f(C), f(x), f(c.s), f(c.det), f(c.lhs), f(c.rhs), f(c.kernel_ratio), b(c.det < 0.0)});
}

void recipe_distortion(const Params& p, std::uint64_t seed, csv::Table& t)
{
    const std::string map = p.str("map");
    const double r = p.real("r");
    std::optional<geometry::GeneralCurve> F;
    double s = 3.0;
    if (map == "crossing") {
        F = geometry::crossing_map(r);
        s = geometry::crossing_parameter(*F);
    } else if (map == "tangential") {
        F = tangential::assemble_embedding(tangential::ConformalChain{}).curve();
    } else {
        F = geometry::EmbeddedDisc::from_kernel(kernels::KernelHandle::parse(map)).as_curve();
    }

    std::vector<std::pair<cd, cd>> pairs;
    const std::string mode = p.str("pairs");
    if (mode == "crossing") {
        for (std::size_t k = 1; k <= p.count("digits"); ++k) {
            const double x = std::pow(10.0, -double(k));
            if (-1.0 + s * x >= 1.0) continue;
            pairs.emplace_back(1.0 - x, -1.0 + s * x);
        }
    } else if (mode == "random") {
        CounterRng rng(seed);
        for (std::size_t i = 0; i < p.count("count"); ++i) pairs.emplace_back(rng.in_disc(0.999), rng.in_disc(0.999));
    } else {
        throw CliError(kMalformedParameter, "pairs must be 'crossing' or 'random'");
    }
    const auto prof = geometry::distortion_profile(*F, pairs);
    t.header = {"d_source", "d_image"};
    for (const auto& smp : prof.samples) t.rows.push_back({f(smp.d_source), f(smp.d_image)});
    t.comments.push_back("min_ratio=" + f(prof.min_ratio));
    t.comments.push_back("max_ratio=" + f(prof.max_ratio));
}

void recipe_carleson(const Params& p, std::uint64_t, csv::Table& t)
{
    const std::string tag = p.str("tag");
    const auto p_max = static_cast<unsigned>(p.count("p_max"));
    std::size_t N = p.count("N");
    if (N == 0) N = tag == "dyadic_separated" ? std::min<std::size_t>(2 * p_max, 30) : tag == "wn_gaussian" ? 20 : 1000;
    const auto seq = sequences::named_sequence(tag, N);
    t = sequences::carleson_table(seq, p_max);
    t.comments.push_back("sequence=" + tag + " N=" + std::to_string(N) + " points=" + std::to_string(seq.size()));
}

void recipe_separation(const Params& p, std::uint64_t, csv::Table& t)
{
    const auto seq = sequences::named_sequence(p.str("tag"), p.count("N"));
    t = sequences::separation_table(seq);
    const auto sep = seq.size() > 1 ? sequences::is_separated(seq) : sequences::Separation{};
    const auto bl = sequences::blaschke_sum(seq);
    t.comments.push_back("truncation=" + std::to_string(seq.size()) + " (delta_n over this many points)");
    t.comments.push_back("inf_gap=" + f(sep.inf_gap) + " separated=" + b(sep.separated));
    t.comments.push_back("blaschke_sum=" + f(bl.sum) + " converged=" + b(bl.converged));
}

void recipe_tangential_embed(const Params& p, std::uint64_t, csv::Table& t)
{
    tangential::ConformalChain chain{p.real("r")};
    const auto e = tangential::assemble_embedding(chain, p.count("m"));
    t = e.boundary_table();
    t.comments.push_back("sphere_defect_max=" + f(e.sphere_defect()) + " (singular sample t=0 excluded)");
}

void recipe_tangency_report(const Params& p, std::uint64_t, csv::Table& t)
{
    const int j_min = static_cast<int>(p.count("j_min")), j_max = static_cast<int>(p.count("j_max"));
    const std::string family = p.str("family");
    if (family == "construction") {
        tangential::ConformalChain chain{p.real("r")};
        const auto e = tangential::assemble_embedding(chain, p.count("m"));
        const auto rep = tangential::tangency_report(e, j_min, j_max, std::max(j_min, 6), j_max);
        t = tangential::tangency_table(rep);
        t.comments.push_back("ratio1_decreasing=" + b(rep.ratio1_decreasing) +
                             " ratio2_increasing=" + b(rep.ratio2_increasing));
        t.comments.push_back("fit Re<F(1)-F(x),F(1)> ~ c1/log^2(1-x): c1=" + f(rep.c1) + " log-log slope=" +
                             f(rep.fit_slope) + " correlation=" + f(rep.fit_correlation));
        return;
    }
    if (j_min < 1 || j_max > 40 || j_min > j_max) throw std::invalid_argument("tangency-report: bad j range");
    const auto disc = geometry::EmbeddedDisc::from_kernel(kernels::KernelHandle::parse(family));
    t.header = {"x", "ratio1", "ratio2"};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int j = j_min; j <= j_max; ++j) {
        const double x = 1.0 - std::ldexp(1.0, -j);
        const auto r = geometry::tangential_ratio(disc, x, 0.0);
        t.rows.push_back({f(x), f(r.ratio1), f(r.ratio2)});
        const double X = std::log(1.0 - x), Y = std::log(r.ratio1);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    const double n = j_max - j_min + 1;
    if (n >= 2) t.comments.push_back("log-log slope of ratio1 against 1-x: " + f((n * sxy - sx * sy) / (n * sxx - sx * sx)));
}

const std::map<std::string, RecipeFn>& dispatch()
{
    static const std::map<std::string, RecipeFn> table{
        {"classify", recipe_classify},
        {"compare", recipe_compare},
        {"pick-check", recipe_pick_check},
        {"interp-extract", recipe_interp_extract},
        {"crossing", recipe_crossing},
        {"distortion", recipe_distortion},
        {"carleson", recipe_carleson},
        {"separation", recipe_separation},
        {"tangential-embed", recipe_tangential_embed},
        {"tangency-report", recipe_tangency_report},
    };
    return table;
}

std::uint64_t parse_seed(const std::string& s)
{
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw CliError(kMalformedParameter, "--seed expects an unsigned 64-bit integer, got '" + s + "'");
    return v;
}

}  // namespace

const std::vector<RecipeInfo>& recipes() { return recipe_table(); }

std::string catalog_text()
{
    std::ostringstream os;
    os << "npdisclab " << kVersion << "\n\n"
       << "usage: npdisclab <recipe> key=value ... [--out PATH] [--seed U64] [--reproducible]\n"
       << "       npdisclab <recipe> --help\n\nrecipes:\n";
    for (const auto& r : recipe_table()) os << "  " << r.name << "\n      " << r.summary << "\n";
    return os.str();
}

std::string recipe_help(const std::string& name)
{
    const RecipeInfo* r = find_recipe(name);
    if (!r) throw CliError(kUnknownRecipe, "unknown recipe '" + name + "'");
    std::ostringstream os;
    os << "npdisclab " << r->name << " key=value ... [--out PATH] [--seed U64] [--reproducible]\n\n"
       << r->summary << "\n\nparameters:\n";
    for (const auto& p : r->params) os << "  " << p.key << " (default " << p.fallback << ")\n      " << p.description << "\n";
    os << "\nrows sorted by: " << r->sort_key << "\n";
    return os.str();
}

ExperimentConfig parse_args(const std::vector<std::string>& args)
{
    if (args.empty()) throw CliError(kUnknownRecipe, "missing recipe");
    ExperimentConfig cfg;
    std::size_t i = 0;
    if (args[0] == "run") {
        i = 1;
    } else {
        cfg.recipe = args[0];
        i = 1;
    }
    std::vector<std::pair<std::string, std::string>> kv;
    for (; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--reproducible") {
            cfg.reproducible = true;
        } else if (a == "--out" || a == "--seed") {
            if (i + 1 >= args.size()) throw CliError(kMalformedParameter, a + " needs a value");
            if (a == "--out")
                cfg.output_path = args[++i];
            else
                cfg.seed = parse_seed(args[++i]);
        } else if (a.rfind("--out=", 0) == 0) {
            cfg.output_path = a.substr(6);
        } else if (a.rfind("--seed=", 0) == 0) {
            cfg.seed = parse_seed(a.substr(7));
        } else if (const auto eq = a.find('='); eq != std::string::npos && eq > 0 && a[0] != '-') {
            kv.emplace_back(a.substr(0, eq), a.substr(eq + 1));
        } else {
            throw CliError(kMalformedParameter, "cannot parse argument '" + a + "'");
        }
    }
    for (auto& [k, v] : kv) {
        if (k == "recipe" && args[0] == "run") {
            cfg.recipe = v;
            continue;
        }
        if (cfg.params.count(k)) throw CliError(kMalformedParameter, "parameter '" + k + "' given twice");
        cfg.params[k] = v;
    }
    if (cfg.recipe.empty()) throw CliError(kUnknownRecipe, "missing recipe (run recipe=<name>)");
    if (!find_recipe(cfg.recipe)) throw CliError(kUnknownRecipe, "unknown recipe '" + cfg.recipe + "'");
    return cfg;
}

csv::Table run_recipe(const ExperimentConfig& config)
{
    const RecipeInfo* info = find_recipe(config.recipe);
    if (!info) throw CliError(kUnknownRecipe, "unknown recipe '" + config.recipe + "'");
    const Params params(*info, config.params);
    csv::Table body;
    try {
        dispatch().at(config.recipe)(params, config.seed, body);
    } catch (const std::invalid_argument& e) {
        throw CliError(kMalformedParameter, e.what());
    } catch (const csv::ParseError& e) {
        throw CliError(kMalformedParameter, e.what());
    }

    csv::Table out;
    out.comments.push_back(std::string("npdisclab ") + kVersion);
    out.comments.push_back("recipe=" + config.recipe);
    for (const auto& [k, v] : params.effective()) out.comments.push_back("param " + k + "=" + v);
    out.comments.push_back("seed=" + std::to_string(config.seed));
    if (!config.reproducible) out.comments.push_back("timestamp=" + utc_timestamp());
    out.comments.push_back("sort=" + info->sort_key);
    for (auto& c : body.comments) out.comments.push_back(std::move(c));
    out.header = std::move(body.header);
    out.rows = std::move(body.rows);
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "list") {
            out << catalog_text();
            return kOk;
        }
        const bool wants_help = std::find(args.begin(), args.end(), "--help") != args.end();
        if (wants_help) {
            std::string name = args[0];
            if (name == "run")
                for (const auto& a : args)
                    if (a.rfind("recipe=", 0) == 0) name = a.substr(7);
            out << recipe_help(name);
            return kOk;
        }
        const ExperimentConfig cfg = parse_args(args);

        std::ofstream file;
        if (cfg.output_path) {
            file.open(*cfg.output_path, std::ios::binary | std::ios::trunc);
            if (!file) throw CliError(kUnwritablePath, "cannot write '" + *cfg.output_path + "'");
        }
        const csv::Table table = run_recipe(cfg);
        std::ostream& dest = cfg.output_path ? static_cast<std::ostream&>(file) : out;
        csv::write(dest, table);
        dest.flush();
        if (!dest) throw CliError(kUnwritablePath, "write failed");
        return kOk;
    } catch (const CliError& e) {
        err << "npdisclab: " << e.what() << "\n";
        return e.code();
    } catch (const std::exception& e) {
        err << "npdisclab: " << e.what() << "\n";
        return kRuntimeFailure;
    }
}

}  // namespace npdisc::cli
