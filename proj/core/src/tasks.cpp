#include "lguess/tasks.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lguess/certificate.hpp"
#include "lguess/errors.hpp"
#include "lguess/rules.hpp"
#include "lguess/sexpr.hpp"

namespace lguess {

namespace {

TermPtr right_nested(const Signature& sig, Symbol op, const std::vector<TermPtr>& items) {
  TermPtr acc = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;)
    acc = Term::make(sig, op, {items[i], acc});
  return acc;
}

std::vector<Position> all_positions(const TermPtr& t) {
  std::vector<Position> out;
  std::function<void(const TermPtr&, Position&)> go = [&](const TermPtr& u, Position& p) {
    out.push_back(p);
    for (std::uint32_t k = 0; k < u->children().size(); ++k) {
      p.push_back(k);
      go(u->child(k), p);
      p.pop_back();
    }
  };
  Position p;
  go(t, p);
  return out;
}

// The associative/commutative scrambling rules, both directions.
RuleSet reorg_rules(const Signature& sig) {
  RuleSet rs("reorg", sig);
  rs.add("Add-C", "(+ a b)", "(+ b a)");
  rs.add_bidirectional("Add-A", "(+ a (+ b c))", "(+ (+ a b) c)");
  rs.add("Times-C", "(* a b)", "(* b a)");
  rs.add_bidirectional("Times-A", "(* a (* b c))", "(* (* a b) c)");
  return rs;
}

}  // namespace

Task generate(const TaskSpec& spec, const Signature& sig) {
  if (spec.n_d < 1 || spec.n_v < 1)
    throw ConfigError("task spec: n_d and n_v must be >= 1");
  std::vector<Symbol> vars;
  for (Symbol s = 0; s < sig.size(); ++s)
    if (sig.kind(s) == Signature::Kind::Variable) vars.push_back(s);
  if (vars.size() < spec.n_v)
    throw ConfigError("signature has fewer variables than n_v");
  vars.resize(spec.n_v);

  Rng rng(spec.rng_seed);
  Symbol plus = *sig.find("+");
  Symbol times = *sig.find("*");

  // 1. sample n_d random non-empty subsets of the variables
  std::vector<std::vector<Symbol>> subsets;
  for (unsigned d = 0; d < spec.n_d; ++d) {
    std::uint64_t mask = 1 + rng.uniform_u64((1ull << spec.n_v) - 1);
    std::vector<Symbol> subset;
    for (unsigned v = 0; v < spec.n_v; ++v)
      if (mask & (1ull << v)) subset.push_back(vars[v]);
    subsets.push_back(std::move(subset));
  }

  // 2. multiply the sum of each subset (right-nested, draw order)
  std::vector<TermPtr> factors;
  for (const auto& subset : subsets) {
    std::vector<TermPtr> leaves;
    for (Symbol v : subset) leaves.push_back(Term::leaf(sig, v));
    factors.push_back(right_nested(sig, plus, leaves));
  }
  TermPtr product = right_nested(sig, times, factors);

  // 3. unfold into the canonical sum of monomials: enumerate variable choices
  // with the first factor varying slowest, each monomial a right-nested
  // product in draw order, the sum right-nested in enumeration order
  std::vector<TermPtr> monomials;
  std::vector<std::size_t> idx(subsets.size(), 0);
  for (;;) {
    std::vector<TermPtr> picks;
    for (std::size_t d = 0; d < subsets.size(); ++d)
      picks.push_back(Term::leaf(sig, subsets[d][idx[d]]));
    monomials.push_back(right_nested(sig, times, picks));
    std::size_t d = subsets.size();
    while (d-- > 0) {
      if (++idx[d] < subsets[d].size()) break;
      idx[d] = 0;
      if (d == 0) goto done;
    }
    if (idx == std::vector<std::size_t>(subsets.size(), 0)) break;
  }
done:
  TermPtr unfolded = right_nested(sig, plus, monomials);

  // 4. scramble with random AC rewrites at random positions
  RuleSet ac = reorg_rules(sig);
  TermPtr start = unfolded;
  std::size_t steps = 3 * static_cast<std::size_t>(start->size());
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<std::pair<std::size_t, Position>> options;
    for (const Position& pos : all_positions(start)) {
      TermPtr sub = subterm_at(start, pos);
      for (std::size_t r = 0; r < ac.rules().size(); ++r)
        if (match_pattern(*ac.rules()[r].lhs, sub, ac.rules()[r].var_count()))
          options.emplace_back(r, pos);
    }
    if (options.empty()) break;
    auto& [r, pos] = options[rng.uniform_index(options.size())];
    start = apply_rule_at(start, ac.rules()[r], pos);
  }

  Task task;
  task.spec = spec;
  task.start = start;
  task.reference_product = product;
  std::ostringstream id;
  id << "d" << spec.n_d << "v" << spec.n_v << "-s" << spec.rng_seed;
  task.id = id.str();
  return task;
}

Task generate(const TaskSpec& spec) {
  static const Signature kSig = poly_signature(5);
  return generate(spec, kSig);
}

namespace {

bool subtree_has_star(const Term& t, const Signature& sig, Symbol star) {
  if (t.op() == star) return true;
  for (const TermPtr& c : t.children())
    if (subtree_has_star(*c, sig, star)) return true;
  return false;
}

}  // namespace

bool is_goal(const Term& t) {
  auto star = t.sig().find("*");
  auto plus = t.sig().find("+");
  if (!star || !plus) return true;
  std::function<bool(const Term&, bool)> ok = [&](const Term& u, bool under_plus) {
    if (u.op() == *star && under_plus) return false;
    bool up = under_plus || u.op() == *plus;
    for (const TermPtr& c : u.children())
      if (!ok(*c, up)) return false;
    return true;
  };
  return ok(t, false);
}

unsigned unfactored_sum_count(const Term& t) {
  auto star = t.sig().find("*");
  auto plus = t.sig().find("+");
  if (!star || !plus) return 0;
  unsigned count = 0;
  std::function<bool(const Term&)> go = [&](const Term& u) -> bool {
    bool has_star = u.op() == *star;
    bool child_star = false;
    for (const TermPtr& c : u.children()) child_star |= go(*c);
    if (u.op() == *plus && child_star) ++count;
    return has_star || child_star;
  };
  go(t);
  return count;
}

std::map<Monomial, long long> poly_normal_form(const Term& t) {
  const Signature& sig = t.sig();
  auto star = sig.find("*");
  auto plus = sig.find("+");
  std::function<std::map<Monomial, long long>(const Term&)> go =
      [&](const Term& u) -> std::map<Monomial, long long> {
    if (u.children().empty()) {
      if (sig.kind(u.op()) != Signature::Kind::Variable)
        throw ConfigError("poly_normal_form: non-variable leaf '" + sig.name(u.op()) + "'");
      return {{Monomial{u.op()}, 1}};
    }
    if (plus && u.op() == *plus) {
      auto a = go(*u.child(0));
      for (auto& [mono, coef] : go(*u.child(1))) a[mono] += coef;
      return a;
    }
    if (star && u.op() == *star) {
      auto a = go(*u.child(0));
      auto b = go(*u.child(1));
      std::map<Monomial, long long> out;
      for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
          Monomial m = ma;
          m.insert(m.end(), mb.begin(), mb.end());
          std::sort(m.begin(), m.end());
          out[m] += ca * cb;
        }
      return out;
    }
    throw ConfigError("poly_normal_form: unsupported operator '" + sig.name(u.op()) + "'");
  };
  return go(t);
}

bool poly_equivalent(const Term& a, const Term& b) {
  return poly_normal_form(a) == poly_normal_form(b);
}

std::vector<Task> build_dataset(unsigned nd_lo, unsigned nd_hi, unsigned nv_lo,
                                unsigned nv_hi, unsigned per_cell,
                                std::uint64_t master_seed, const Signature& sig) {
  if (nd_lo > nd_hi || nv_lo > nv_hi)
    throw ConfigError("build_dataset: empty parameter range");
  std::vector<Task> out;
  for (unsigned nd = nd_lo; nd <= nd_hi; ++nd)
    for (unsigned nv = nv_lo; nv <= nv_hi; ++nv)
      for (unsigned k = 0; k < per_cell; ++k) {
        TaskSpec spec;
        spec.n_d = nd;
        spec.n_v = nv;
        spec.rng_seed = derive_seed(master_seed, (static_cast<std::uint64_t>(nd) << 40) |
                                                     (static_cast<std::uint64_t>(nv) << 20) | k);
        Task t = generate(spec, sig);
        std::ostringstream id;
        id << "d" << nd << "v" << nv << "-" << k;
        t.id = id.str();
        out.push_back(std::move(t));
      }
  return out;
}

std::string dataset_to_tsv(const std::vector<Task>& tasks) {
  std::ostringstream out;
  for (const Task& t : tasks)
    out << t.id << '\t' << t.spec.n_d << '\t' << t.spec.n_v << '\t'
        << print_sexpr(t.start) << '\t' << print_sexpr(t.reference_product) << '\n';
  return out.str();
}

std::vector<Task> dataset_from_tsv(std::string_view text, const Signature& sig) {
  std::vector<Task> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Task t;
    std::string nd, nv, start, ref;
    if (!std::getline(ls, t.id, '\t') || !std::getline(ls, nd, '\t') ||
        !std::getline(ls, nv, '\t') || !std::getline(ls, start, '\t') ||
        !std::getline(ls, ref))
      throw ParseError("dataset line needs 5 tab-separated fields: " + line, 0);
    t.spec.n_d = static_cast<unsigned>(std::stoul(nd));
    t.spec.n_v = static_cast<unsigned>(std::stoul(nv));
    t.start = parse_sexpr(start, sig);
    t.reference_product = parse_sexpr(ref, sig);
    out.push_back(std::move(t));
  }
  return out;
}

void dataset_to_file(const std::vector<Task>& tasks, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dataset file: " + path);
  out << dataset_to_tsv(tasks);
}

std::vector<Task> dataset_from_file(const std::string& path, const Signature& sig) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return dataset_from_tsv(buf.str(), sig);
}

}  // namespace lguess
