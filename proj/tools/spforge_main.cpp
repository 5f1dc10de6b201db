// Command-line front end: load a workspace file, run one computation, print a
// line-keyed report.  Exit codes: 0 ok, 1 math error, 2 input error,
// 3 internal error.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spforge/propcheck.hpp"

namespace {

using namespace spf;

[[noreturn]] void usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n"
            << "usage: spforge <command> [--file F] [flags]\n"
            << "commands: mutate-matrix, mutate-quiver, sp-mutate, split, jdim,\n"
            << "          rep-mutate, reflect, restrict, unfold-check,\n"
            << "          unfold-obstruct, nondeg-search, verify\n";
  std::exit(2);
}

struct Args {
  std::string command;
  std::map<std::string, std::string> flags;

  std::string get(const std::string& key, const std::string& def = "") const {
    auto it = flags.find(key);
    return it == flags.end() ? def : it->second;
  }
  int get_int(const std::string& key, int def) const {
    std::string v = get(key);
    if (v.empty()) return def;
    try {
      return std::stoi(v);
    } catch (...) {
      usage_error("flag --" + key + " needs an integer");
    }
  }
  std::vector<int> get_int_list(const std::string& key) const {
    std::vector<int> out;
    std::string v = get(key);
    if (v.empty()) return out;
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      try {
        out.push_back(std::stoi(tok));
      } catch (...) {
        usage_error("flag --" + key + " needs a comma-separated integer list");
      }
    }
    return out;
  }
};

Args parse_args(int argc, char** argv) {
  Args a;
  if (argc < 2) usage_error("missing command");
  a.command = argv[1];
  for (int i = 2; i < argc; ++i) {
    std::string s = argv[i];
    if (s.rfind("--", 0) != 0) usage_error("unexpected argument '" + s + "'");
    if (i + 1 >= argc) usage_error("flag " + s + " needs a value");
    a.flags[s.substr(2)] = argv[++i];
  }
  return a;
}

int effective_trunc() {
  const char* env = std::getenv("SPFORGE_TRUNC");
  if (!env) return kDefaultTrunc;
  int n = std::atoi(env);
  if (n < 2) usage_error("SPFORGE_TRUNC must be at least 2");
  return n;
}

Workspace load(const Args& a, int trunc) {
  std::string file = a.get("file");
  if (file.empty()) usage_error("--file is required for this command");
  std::ifstream in(file);
  if (!in) {
    std::cerr << "error: cannot open '" << file << "'\n";
    std::exit(2);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return parse_workspace(os.str(), trunc);
}

SpeciesWithPotential species_of(const Workspace& ws) {
  AlgebraElement S = ws.S ? *ws.S : AlgebraElement(ws.q, ws.tw, ws.trunc);
  return SpeciesWithPotential::make(ws.q, ws.tw, ws.trunc, S);
}

void print_matrix(const ExchangeMatrix& m) {
  for (const auto& row : m.B) {
    std::ostringstream os;
    for (size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << row[j];
    std::cout << "row: " << os.str() << "\n";
  }
}

void print_quiver(const WeightedQuiver& q) {
  std::ostringstream os;
  for (int i = 0; i < q.n(); ++i) os << (i ? "," : "") << q.weights[i];
  std::cout << "weights: " << os.str() << "\n";
  for (const Arrow& a : q.arrows)
    std::cout << "arrow: " << a.name << " " << a.tail << " " << a.head << "\n";
}

int run(const Args& args) {
  int trunc = effective_trunc();
  const std::string& cmd = args.command;

  if (cmd == "mutate-matrix") {
    Workspace ws = load(args, trunc);
    int k = args.get_int("k", 0);
    if (k == 0) usage_error("--k is required");
    ExchangeMatrix m = mutate_matrix(wq_to_matrix(*ws.q), k);
    print_matrix(m);
    return 0;
  }
  if (cmd == "mutate-quiver") {
    Workspace ws = load(args, trunc);
    int k = args.get_int("k", 0);
    if (k == 0) usage_error("--k is required");
    print_quiver(mutate_wq(*ws.q, k));
    return 0;
  }
  if (cmd == "sp-mutate") {
    Workspace ws = load(args, trunc);
    std::vector<int> seq = args.get_int_list("seq");
    if (seq.empty()) usage_error("--seq is required");
    SpeciesWithPotential sp = species_of(ws);
    for (int k : seq) sp = mutate(sp, k);
    print_quiver(*sp.q);
    std::cout << "potential:\n" << print_potential(*sp.q, *sp.tw, sp.S);
    return 0;
  }
  if (cmd == "split") {
    Workspace ws = load(args, trunc);
    SplitResult sr = split(species_of(ws));
    std::cout << "reduced potential:\n"
              << print_potential(*sr.reduced.q, *sr.reduced.tw, sr.reduced.S);
    std::cout << "trivial potential:\n"
              << print_potential(*sr.trivial.q, *sr.trivial.tw, sr.trivial.S);
    for (const auto& [a, b] : sr.trivial_pairs)
      std::cout << "trivial pair: " << ws.q->arrows[a].name << " "
                << ws.q->arrows[b].name << "\n";
    return 0;
  }
  if (cmd == "jdim") {
    Workspace ws = load(args, trunc);
    SpeciesWithPotential sp = species_of(ws);
    JacobianReport rep = jacobian_dim(sp.S, args.get_int("N", trunc));
    std::cout << "dim: " << rep.dim << "\n"
              << "stabilized: " << (rep.stabilized ? "yes" : "no") << "\n";
    for (const auto& [ht, d] : rep.block_dims)
      std::cout << "block " << ht.first << "," << ht.second << ": " << d << "\n";
    return 0;
  }
  if (cmd == "rep-mutate") {
    Workspace ws = load(args, trunc);
    int k = args.get_int("k", 0);
    if (k == 0) usage_error("--k is required");
    if (!ws.rep) usage_error("input file has no [rep] section");
    RepMutation m = mutate_rep(*ws.rep, species_of(ws), k);
    Workspace out;
    out.tw = m.sp.tw;
    out.q = m.sp.q;
    out.trunc = trunc;
    out.S = m.sp.S;
    out.rep = m.rep;
    std::cout << print_workspace(out);
    return 0;
  }
  if (cmd == "reflect") {
    Workspace ws = load(args, trunc);
    int k = args.get_int("k", 0);
    if (k == 0) usage_error("--k is required");
    if (!ws.rep) usage_error("input file has no [rep] section");
    SpeciesWithPotential sp = species_of(ws);
    RepMutation m = is_sink(*ws.q, k) ? reflect_sink(*ws.rep, sp, k)
                                      : reflect_source(*ws.rep, sp, k);
    Workspace out;
    out.tw = m.sp.tw;
    out.q = m.sp.q;
    out.trunc = trunc;
    out.S = m.sp.S;
    out.rep = m.rep;
    std::cout << print_workspace(out);
    return 0;
  }
  if (cmd == "restrict") {
    Workspace ws = load(args, trunc);
    std::vector<int> vs = args.get_int_list("vertices");
    if (vs.empty()) usage_error("--vertices is required");
    SpeciesWithPotential sp =
        restrict_sp(species_of(ws), std::set<int>(vs.begin(), vs.end()));
    print_quiver(*sp.q);
    std::cout << "potential:\n" << print_potential(*sp.q, *sp.tw, sp.S);
    return 0;
  }
  if (cmd == "unfold-check") {
    Workspace ws = load(args, trunc);
    if (!ws.unfolding) usage_error("input file has no [unfolding] section");
    std::vector<std::string> report = check_unfolding(*ws.unfolding);
    if (report.empty()) {
      std::cout << "clean\n";
      return 0;
    }
    for (const std::string& r : report) std::cout << "violation: " << r << "\n";
    return 1;
  }
  if (cmd == "unfold-obstruct") {
    Workspace ws = load(args, trunc);
    if (!ws.unfolding) usage_error("input file has no [unfolding] section");
    int a = args.get_int("a", 0), b = args.get_int("b", 0), N = args.get_int("N", 0);
    if (a == 0 || b == 0 || N == 0) usage_error("--a, --b and --N are required");
    ObstructionWitness w = obstruction_witness(a, b, N, ws.unfolding->C);
    std::cout << "positive entry: block(1,3)[" << w.positive.first << ","
              << w.positive.second << "] = " << w.positive_value << "\n";
    std::cout << "negative entry: block(1,3)[" << w.negative.first << ","
              << w.negative.second << "] = " << w.negative_value << "\n";
    return 0;
  }
  if (cmd == "nondeg-search") {
    Workspace ws = load(args, trunc);
    SequenceQuery q;
    q.q = ws.q;
    q.tw = ws.tw;
    q.seq = args.get_int_list("seq");
    if (q.seq.empty()) usage_error("--seq is required");
    q.budget = args.get_int("budget", 200);
    q.max_cycle_len = args.get_int("maxlen", 6);
    q.seed = u64(args.get_int("seed", 1));
    q.trunc = trunc;
    SearchResult res = search_sequence_nondegenerate(q);
    std::cout << "candidates tried: " << res.candidates_tried << "\n";
    for (int m : res.escalations) std::cout << "escalated to base degree " << m << "\n";
    if (!res.found) {
      std::cout << "exhausted (inconclusive)\n";
      return 1;
    }
    std::cout << "witness over p=" << res.tw->p << " m=" << res.tw->base_m << ":\n"
              << print_potential(*res.sp.q, *res.sp.tw, res.sp.S);
    return 0;
  }
  if (cmd == "verify") {
    std::string suite = args.get("suite");
    int trials = args.get_int("trials", 50);
    u64 seed = u64(args.get_int("seed", 1));
    PropResult res;
    if (suite == "derivations")
      res = run_derivation_suite(trials, seed);
    else if (suite == "involution")
      res = run_involution_suite(trials, seed);
    else if (suite == "reps")
      res = run_rep_suite(trials, seed);
    else
      usage_error("unknown suite '" + suite +
                  "' (expected derivations, involution or reps)");
    std::cout << "trials: " << res.trials << "\n"
              << "skipped: " << res.skipped << "\n"
              << "failures: " << res.failures.size() << "\n";
    for (const std::string& f : res.failures) std::cout << "failure: " << f << "\n";
    return res.ok() ? 0 : 1;
  }
  usage_error("unknown command '" + cmd + "'");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(parse_args(argc, argv));
  } catch (const spf::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (spf::classify(e.code())) {
      case spf::err_class::math:
        return 1;
      case spf::err_class::input:
        return 2;
      default:
        return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
