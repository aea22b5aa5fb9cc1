#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "roughlab/area.hpp"
#include "roughlab/enhance.hpp"
#include "roughlab/errors.hpp"
#include "roughlab/lacunary.hpp"
#include "roughlab/variation.hpp"
#include "roughlab/young.hpp"

namespace roughlab::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  throw ValidationError("spec field '" + where + "': " + msg);
}

// A JSON value together with its dotted location, for error messages.
struct Node {
  const json* j;
  std::string where;

  bool has(const char* key) const { return j->is_object() && j->contains(key); }
  Node at(const char* key) const {
    const std::string w = where.empty() ? key : where + "." + key;
    if (!j->is_object()) bad(where, "expected an object");
    if (!j->contains(key)) bad(w, "missing");
    return {&(*j)[key], w};
  }
  Node operator[](std::size_t i) const {
    return {&(*j)[i], where + "[" + std::to_string(i) + "]"};
  }
  std::size_t size() const {
    if (!j->is_array()) bad(where, "expected an array");
    return j->size();
  }
  double number() const {
    if (!j->is_number()) bad(where, "expected a number");
    return j->get<double>();
  }
  long integer() const {
    if (!j->is_number_integer()) bad(where, "expected an integer");
    return j->get<long>();
  }
  std::string string() const {
    if (!j->is_string()) bad(where, "expected a string");
    return j->get<std::string>();
  }
  std::vector<double> numbers() const {
    std::vector<double> v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back((*this)[i].number());
    return v;
  }
  double number_or(const char* key, double dflt) const {
    return has(key) ? at(key).number() : dflt;
  }
  long integer_or(const char* key, long dflt) const {
    return has(key) ? at(key).integer() : dflt;
  }
  std::string string_or(const char* key, const std::string& dflt) const {
    return has(key) ? at(key).string() : dflt;
  }
};

// p as a number > lo, or the string "inf".
double exponent(const Node& n, double lo) {
  if (n.j->is_string()) {
    if (n.string() != "inf") bad(n.where, "expected a number or \"inf\"");
    return kInfinityP;
  }
  const double p = n.number();
  if (!(p > lo)) bad(n.where, "must be > " + format_real(lo));
  return p;
}

struct Context {
  const Options& opt;
  fs::path spec_dir;
  std::vector<fs::path> written;
};

std::ofstream open_out(Context& ctx, const std::string& name) {
  fs::create_directories(ctx.opt.out_dir);
  const fs::path file = ctx.opt.out_dir / name;
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  ctx.written.push_back(file);
  return out;
}

void write_json(Context& ctx, const std::string& name, const json& j) {
  auto out = open_out(ctx, name);
  out << j.dump(2) << '\n';
}

void write_rows(Context& ctx, const std::string& name,
                const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows,
                const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json o = json::object();
      for (std::size_t c = 0; c < header.size(); ++c) o[header[c]] = r[c];
      arr.push_back(o);
    }
    write_json(ctx, name + ".json", arr);
    return;
  }
  auto out = open_out(ctx, name + ".csv");
  for (std::size_t c = 0; c < header.size(); ++c)
    out << (c ? "," : "") << header[c];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c)
      out << (c ? "," : "") << format_real(r[c]);
    out << '\n';
  }
}

json to_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const Tensor2& t) {
  json rows = json::array();
  for (std::size_t i = 0; i < t.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < t.cols(); ++j) r.push_back(to_json(t(i, j)));
    rows.push_back(r);
  }
  return rows;
}

// ---- generators ---------------------------------------------------------

std::vector<double> grid_times(const Node& g, double T_default) {
  if (g.has("dyadic")) {
    const long N = g.at("dyadic").integer();
    if (N < 0 || N > 10) bad(g.where + ".dyadic", "must lie in 0..10");
    auto t = dyadic_times(static_cast<int>(N));
    const double T = g.number_or("T", T_default);
    for (auto& x : t) x *= T;
    return t;
  }
  if (g.has("uniform")) {
    const long n = g.at("uniform").integer();
    if (n < 2) bad(g.where + ".uniform", "need at least 2 points");
    if (static_cast<std::size_t>(n) > max_samples())
      throw SizeLimitError("grid of " + std::to_string(n) +
                           " points exceeds the sample cap");
    return uniform_times(static_cast<std::size_t>(n), g.number_or("T", T_default));
  }
  bad(g.where, "expected {\"dyadic\": N} or {\"uniform\": n}");
}

ModulusFn modulus(const Node& m) {
  const std::string kind = m.at("kind").string();
  if (kind == "power") return ModulusFn::power(m.at("a").number());
  if (kind == "log_power")
    return ModulusFn::log_power(m.at("a").number(), m.at("c").number());
  if (kind == "iterated_log")
    return ModulusFn::iterated_log(m.at("a").number(), m.at("c").number());
  if (kind == "constant") return ModulusFn::constant();
  if (kind == "product") {
    const Node f = m.at("factors");
    if (f.size() == 0) bad(f.where, "empty product");
    ModulusFn out = modulus(f[0]);
    for (std::size_t i = 1; i < f.size(); ++i)
      out = ModulusFn::product(out, modulus(f[i]));
    return out;
  }
  bad(m.where + ".kind", "unknown modulus kind '" + kind + "'");
}

std::vector<int> signs(const Node& in, long K) {
  const std::string s = in.string_or("signs", "alternating");
  std::vector<int> eps(static_cast<std::size_t>(K + 1), 1);
  if (s == "alternating")
    for (long k = 0; k <= K; ++k) eps[k] = k % 2 ? -1 : 1;
  else if (s != "plus")
    bad(in.where + ".signs", "expected \"alternating\" or \"plus\"");
  return eps;
}

LacunarySpec lacunary_spec(const Node& in) {
  const std::string family = in.string_or("family", "f");
  const long l1 = in.integer_or("l1", 2);
  const long count = in.integer_or("blocks", 1);
  if (count < 1) bad(in.where + ".blocks", "must be >= 1");
  if (family == "f" || family == "f_tail") {
    const auto b = build_blocks(BlockKind::f_type, in.number_or("c", kDefaultBlockC),
                                l1, static_cast<int>(count));
    const long K = in.at("K").integer();
    if (family == "f") return f_spec(b, K);
    return f_tail_spec(b, static_cast<int>(in.at("first").integer()), K);
  }
  if (family == "g") {
    const auto b = build_blocks(BlockKind::g_type, 1.0, l1, static_cast<int>(count));
    return g_spec(b, static_cast<int>(in.integer_or("n", 1)));
  }
  if (family == "modulus") {
    const long K = in.at("K").integer();
    return modulus_spec(modulus(in.at("m")), exponent(in.at("p"), 1.0),
                        signs(in, K), K);
  }
  bad(in.where + ".family", "unknown family '" + family + "'");
}

struct Input {
  SampledPath path;
  std::optional<TrigPath> trig;
  bool lacunary = false;
};

Input load_input(Context& ctx, const Node& in) {
  const std::string kind = in.at("kind").string();
  if (kind == "csv") {
    fs::path file = in.at("file").string();
    if (file.is_relative()) file = ctx.spec_dir / file;
    return {read_csv_file(file.string()), std::nullopt, false};
  }
  if (kind == "points") {
    const auto times = in.at("times").numbers();
    const Node v = in.at("values");
    if (v.size() != times.size()) bad(v.where, "length differs from times");
    std::vector<Point> pts;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Node row = v[i];
      pts.push_back(row.j->is_array() ? row.numbers() : Point{row.number()});
    }
    return {SampledPath::from_points(times, pts), std::nullopt, false};
  }
  if (kind == "lacunary") {
    const auto spec = lacunary_spec(in);
    const auto times = grid_times(in.at("grid"), 1.0);
    return {materialize(spec, times), to_trig_path(spec), true};
  }
  if (kind == "trig") {
    const Node terms = in.at("terms");
    std::vector<TrigTerm> tt;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const Node t = terms[i];
      tt.push_back({t.at("a").number(), t.at("freq").number(),
                    t.number_or("phase", 0.0)});
    }
    const long dim = in.integer_or("dim", 2);
    if (dim < 2) bad(in.where + ".dim", "must be >= 2");
    TrigPath trig(tt, 0, 1, static_cast<std::size_t>(dim));
    const auto times = grid_times(in.at("grid"), 1.0);
    return {trig.sample(times), trig, false};
  }
  if (kind == "rn") {
    const long n = in.at("n").integer();
    const auto times = grid_times(in.at("grid"), 2.0 * std::numbers::pi);
    std::vector<Point> pts;
    for (double t : times) pts.push_back(eval_rn(static_cast<int>(n), t));
    const double r = 1.0 / std::sqrt(static_cast<double>(n));
    return {SampledPath::from_points(times, pts),
            TrigPath({{r, static_cast<double>(n) / (2.0 * std::numbers::pi), 0.0}}),
            false};
  }
  if (kind == "h") {
    const auto times = grid_times(in.at("grid"), std::exp(-1.0));
    std::vector<double> v;
    for (double t : times) v.push_back(eval_h(t));
    return {SampledPath::from_scalar(times, v), std::nullopt, false};
  }
  if (kind == "random") {
    const long n = in.at("n").integer();
    const long d = in.integer_or("dim", 2);
    if (n < 2) bad(in.where + ".n", "need at least 2 points");
    if (d < 1) bad(in.where + ".dim", "must be >= 1");
    if (static_cast<std::size_t>(n) > max_samples())
      throw SizeLimitError("random path exceeds the sample cap");
    const std::uint64_t seed =
        ctx.opt.seed ? *ctx.opt.seed
                     : static_cast<std::uint64_t>(in.integer_or("seed", 0));
    // Gaussian walk with step variance 1/(n-1).
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sd = 1.0 / std::sqrt(static_cast<double>(n - 1));
    std::vector<double> flat(static_cast<std::size_t>(n * d), 0.0);
    for (long i = 1; i < n; ++i)
      for (long c = 0; c < d; ++c)
        flat[i * d + c] = flat[(i - 1) * d + c] + sd * gauss(eng);
    return {SampledPath(uniform_times(static_cast<std::size_t>(n)), flat,
                        static_cast<std::size_t>(d)),
            std::nullopt, false};
  }
  bad(in.where + ".kind", "unknown input kind '" + kind + "'");
}

std::vector<Partition> schedule(const Node& spec, const SampledPath& path) {
  if (!spec.has("schedule")) return default_schedule(path);
  const Node s = spec.at("schedule");
  std::vector<Partition> out;
  if (s.has("dyadic")) {
    const auto r = s.at("dyadic").numbers();
    if (r.size() != 2 || r[0] > r[1]) bad(s.where + ".dyadic", "expected [lo, hi]");
    for (int N = static_cast<int>(r[0]); N <= static_cast<int>(r[1]); ++N)
      out.push_back(dyadic_partition(path, N));
    return out;
  }
  if (s.has("strides")) {
    for (double st : s.at("strides").numbers()) {
      const auto k = static_cast<std::size_t>(st);
      if (k < 1 || static_cast<double>(k) != st || (path.size() - 1) % k)
        bad(s.where + ".strides", "stride " + format_real(st) +
                                      " does not divide the grid");
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < path.size(); i += k) idx.push_back(i);
      out.emplace_back(std::move(idx), path.size());
    }
    return out;
  }
  bad(s.where, "expected {\"dyadic\": [lo, hi]} or {\"strides\": [...]}");
}

std::string format_of(const Node& spec, const std::string& dflt,
                      std::initializer_list<const char*> allowed) {
  if (!spec.has("output")) return dflt;
  const Node o = spec.at("output");
  if (!o.has("format")) return dflt;
  const std::string f = o.at("format").string();
  for (const char* a : allowed)
    if (f == a) return f;
  bad(o.where + ".format", "format '" + f + "' not available here");
}

std::string stem(const Node& spec, const std::string& command) {
  if (!spec.has("output")) return command;
  const std::string s = spec.at("output").string_or("name", command);
  if (s.empty() || s.find_first_of("/\\") != std::string::npos)
    bad("output.name", "must be a plain file stem");
  return s;
}

// ---- commands -----------------------------------------------------------

void cmd_pvar(Context& ctx, const Node& spec, const std::string& name) {
  format_of(spec, "json", {"json"});
  const double p = exponent(spec.at("p"), 1.0);
  const Input in = load_input(ctx, spec.at("input"));
  const auto rep = p_variation(in.path, p);
  json j = {{"command", "pvar"},
            {"p", std::isfinite(p) ? json(p) : json("inf")},
            {"value", rep.value},
            {"samples", in.path.size()},
            {"partition_size", rep.optimal_partition.size()}};
  write_json(ctx, name + ".json", j);
  auto out = open_out(ctx, name + "_partition.csv");
  out << "index,t";
  for (std::size_t c = 0; c < in.path.dim(); ++c) out << ",x" << c;
  out << '\n';
  for (std::size_t i : rep.optimal_partition.indices()) {
    out << i << ',' << format_real(in.path.time(i));
    for (double x : in.path.point(i)) out << ',' << format_real(x);
    out << '\n';
  }
}

void cmd_area(Context& ctx, const Node& spec, const std::string& name) {
  const std::string format = format_of(spec, "csv", {"csv", "json"});
  const Input in = load_input(ctx, spec.at("input"));
  const std::string method = spec.string_or("method", "pl");
  if (method != "pl" && method != "trig") bad("method", "expected \"pl\" or \"trig\"");
  if (method == "trig" && !in.trig) bad("method", "input has no trigonometric form");

  std::vector<std::size_t> idx;
  if (spec.has("times")) {
    for (double t : spec.at("times").numbers()) idx.push_back(in.path.index_of(t));
  } else {
    const long k = spec.integer_or("points", 5);
    if (k < 2) bad("points", "need at least 2 points");
    const std::size_t n = in.path.size();
    for (long i = 0; i < k; ++i)
      idx.push_back(static_cast<std::size_t>(
          std::llround(static_cast<double>(i) * static_cast<double>(n - 1) /
                       static_cast<double>(k - 1))));
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

  const std::size_t d = in.path.dim();
  std::vector<std::string> header = {"s", "t"};
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b)
      header.push_back("A_" + std::to_string(a) + "_" + std::to_string(b));
  std::vector<std::vector<double>> rows;
  const AreaTable table(in.path);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      const double s = in.path.time(idx[i]), t = in.path.time(idx[j]);
      const Tensor2 A = method == "trig" ? trig_area(*in.trig, s, t)
                                         : table(idx[i], idx[j]);
      std::vector<double> row = {s, t};
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b) row.push_back(A(a, b));
      rows.push_back(std::move(row));
    }
  }
  write_rows(ctx, name, header, rows, format);
}

json convergence_json(const ConvergenceReport& rep) {
  json levels = json::array();
  for (const auto& l : rep.levels)
    levels.push_back({{"mesh", l.mesh}, {"value", to_json(l.value)},
                      {"diff", to_json(l.diff)}});
  return {{"status", to_string(rep.status)},
          {"tol", rep.tol},
          {"levels", levels},
          {"final_value", rep.final_value ? to_json(*rep.final_value) : json(nullptr)}};
}

void cmd_integrate(Context& ctx, const Node& spec, const std::string& name) {
  format_of(spec, "json", {"json"});
  const Node first = spec.at("input");
  SampledPath p1 = SampledPath::from_scalar({0.0, 1.0}, {0.0, 0.0});
  SampledPath p2 = p1;
  bool lacunary = false;
  if (first.at("kind").string() == "necessity") {
    const long K = first.at("K").integer();
    const auto times = grid_times(first.at("grid"), 1.0);
    auto pair = necessity_pair(modulus(first.at("m1")), modulus(first.at("m2")),
                               exponent(first.at("p"), 1.0), signs(first, K), K,
                               times);
    p1 = std::move(pair.first);
    p2 = std::move(pair.second);
    lacunary = true;
  } else {
    Input a = load_input(ctx, first);
    Input b = load_input(ctx, spec.at("input2"));
    lacunary = a.lacunary || b.lacunary;
    p1 = std::move(a.path);
    p2 = std::move(b.path);
  }
  const double tol = ctx.opt.tol ? *ctx.opt.tol
                                 : spec.number_or("tol", lacunary ? 1e-4 : 1e-8);
  const auto rep = rs_integrate(p1, p2, schedule(spec, p1), tol);
  json j = convergence_json(rep);
  j["command"] = "integrate";
  write_json(ctx, name + ".json", j);
  if (rep.integral_path) {
    auto out = open_out(ctx, name + "_integral.csv");
    write_csv(out, *rep.integral_path);
  }
}

void cmd_lacunary(Context& ctx, const Node& spec, const std::string& name) {
  const std::string format = format_of(spec, "csv", {"csv", "json"});
  const Node in = spec.at("input");
  const auto range = spec.at("N").numbers();
  if (range.size() != 2 || range[0] < 1 || range[0] > range[1])
    bad("N", "expected [lo, hi] with 1 <= lo <= hi");
  const long lo = static_cast<long>(range[0]), hi = static_cast<long>(range[1]);
  const long stride = spec.integer_or("stride", 1);
  if (stride < 1) bad("stride", "must be >= 1");

  std::vector<double> values;
  std::vector<long> boundaries;
  std::function<int(long)> block_of = [](long) { return 0; };
  std::optional<LacunarySpec> ls;
  if (in.at("kind").string() == "necessity") {
    const long K = in.integer_or("K", hi);
    const auto m1 = modulus(in.at("m1")), m2 = modulus(in.at("m2"));
    const double p = exponent(in.at("p"), 1.0);
    const auto eps = signs(in, std::max(K, hi));
    for (long N = lo; N <= hi; ++N)
      values.push_back(necessity_bracket(m1, m2, p, eps, N));
  } else if (in.at("kind").string() == "lacunary") {
    ls = lacunary_spec(in);
    values = bracket_sum_table(*ls, lo, hi);
    boundaries = ls->blocks.l;
    block_of = [&](long N) { return ls->blocks.block_of(N); };
  } else {
    bad(in.where + ".kind", "expected \"lacunary\" or \"necessity\"");
  }

  // Every stride-th N, the range ends, and both sides of each block boundary.
  std::set<long> rows;
  for (long N = lo; N <= hi; N += stride) rows.insert(N);
  rows.insert(hi);
  for (long l : boundaries)
    for (long N : {l - 1, l})
      if (N >= lo && N <= hi) rows.insert(N);
  std::vector<std::vector<double>> out;
  for (long N : rows)
    out.push_back({static_cast<double>(N), values[N - lo],
                   static_cast<double>(block_of(N))});
  write_rows(ctx, name, {"N", "value", "block_index"}, out, format);
}

void cmd_probe(Context& ctx, const Node& spec, const std::string& name) {
  format_of(spec, "json", {"json"});
  const Input in = load_input(ctx, spec.at("input"));
  ProbeConfig cfg;
  cfg.tol = ctx.opt.tol ? *ctx.opt.tol : spec.number_or("tol", cfg.tol);
  cfg.decay_factor = spec.number_or("decay_factor", cfg.decay_factor);
  cfg.growth_factor = spec.number_or("growth_factor", cfg.growth_factor);
  if (spec.has("deltas")) cfg.deltas = spec.at("deltas").numbers();
  const std::string kind = spec.string_or("probe", "enhancibility");
  const auto sched = schedule(spec, in.path);
  ProbeReport rep;
  if (kind == "enhancibility")
    rep = enhancibility_probe(in.path, sched, cfg);
  else if (kind == "weak")
    rep = weak_geometric_probe(in.path, sched, cfg);
  else
    bad("probe", "expected \"enhancibility\" or \"weak\"");

  json levels = json::array(), mod = json::array();
  for (const auto& l : rep.levels)
    levels.push_back({{"mesh", l.mesh}, {"diff", to_json(l.diff)}, {"sup", l.sup}});
  for (const auto& e : rep.equicontinuity_modulus)
    mod.push_back({{"delta", e.delta}, {"value", e.value}});
  write_json(ctx, name + ".json",
             {{"verdict", to_string(rep.verdict)},
              {"levels", levels},
              {"equicontinuity_modulus", mod}});
}

void cmd_constants(Context& ctx, const Node& spec, const std::string& name) {
  const std::string format = format_of(spec, "csv", {"csv", "json"});
  const auto as = spec.at("a").numbers();
  const auto ps = spec.at("p").numbers();
  const auto Ms = spec.has("M") ? spec.at("M").numbers() : std::vector<double>{1.0};
  std::vector<std::vector<double>> rows;
  for (double a : as)
    for (double p : ps)
      for (double M : Ms) {
        const auto [capm, tilde] = constants_CapM(a, p, M);
        rows.push_back({a, p, M, constants_Cap(a, p), capm, tilde});
      }
  write_rows(ctx, name, {"a", "p", "M", "C_ap", "C_apM", "C_tilde"}, rows, format);
}

}  // namespace

std::vector<fs::path> run(const Options& opt) {
  std::ifstream f(opt.spec_file);
  if (!f) throw ValidationError("cannot open spec " + opt.spec_file.string());
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ValidationError(opt.spec_file.string() + ": " + e.what());
  }
  const Node spec{&doc, ""};
  if (!doc.is_object()) bad("", "spec must be a JSON object");
  if (spec.has("command") && spec.at("command").string() != opt.command)
    bad("command", "spec is for '" + spec.at("command").string() +
                       "', invoked as '" + opt.command + "'");
  if (opt.tol && !(*opt.tol > 0.0)) throw ValidationError("--tol must be > 0");

  Context ctx{opt, opt.spec_file.parent_path(), {}};
  const std::string name = stem(spec, opt.command);
  if (opt.command == "pvar") cmd_pvar(ctx, spec, name);
  else if (opt.command == "area") cmd_area(ctx, spec, name);
  else if (opt.command == "integrate") cmd_integrate(ctx, spec, name);
  else if (opt.command == "lacunary") cmd_lacunary(ctx, spec, name);
  else if (opt.command == "probe") cmd_probe(ctx, spec, name);
  else if (opt.command == "constants") cmd_constants(ctx, spec, name);
  else throw ValidationError("unknown command '" + opt.command + "'");
  return ctx.written;
}

int run_main(const Options& opt, std::ostream& err) {
  try {
    for (const auto& p : run(opt)) err << "wrote " << p.string() << '\n';
    return 0;
  } catch (const ValidationError& e) {
    err << "roughlab: invalid input: " << e.what() << '\n';
    return 2;
  } catch (const SizeLimitError& e) {
    err << "roughlab: size limit: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "roughlab: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace roughlab::cli
