#include "lguess/bigram.hpp"

#include <sstream>

#include "lguess/errors.hpp"

namespace lguess {

ContextTable::ContextTable(const Signature& sig) {
  offsets_.resize(sig.size(), 0);
  ContextId next = 1;  // 0 is the root context
  for (Symbol s = 0; s < sig.size(); ++s) {
    offsets_[s] = next;
    next += sig.arity(s);
  }
  count_ = next;
}

std::string ContextTable::label(const Signature& sig, ContextId c) const {
  if (c == kRootContext) return "_|_";
  for (Symbol s = 0; s < sig.size(); ++s) {
    if (sig.arity(s) == 0) continue;
    if (c >= offsets_[s] && c < offsets_[s] + sig.arity(s))
      return sig.name(s) + "_" + std::to_string(c - offsets_[s] + 1);
  }
  return "?";
}

UpdateConfig::UpdateConfig(double alpha_) : alpha(alpha_) {
  if (!(alpha > 1.0)) throw ConfigError("update alpha must be > 1");
}

BigramModel::BigramModel(const Signature& sig)
    : sig_(&sig), contexts_(sig) {
  if (sig.size() == 0) throw ConfigError("bigram model over empty signature");
  weights_.assign(contexts_.count() * sig.size(), 1.0 / sig.size());
}

BigramModel BigramModel::from_weights(
    const Signature& sig, const std::vector<std::vector<double>>& rows) {
  BigramModel m(sig);
  if (rows.size() != m.contexts_.count())
    throw ConfigError("from_weights: wrong number of context rows");
  for (ContextId c = 0; c < rows.size(); ++c) {
    if (rows[c].size() != sig.size())
      throw ConfigError("from_weights: wrong row width");
    for (Symbol s = 0; s < sig.size(); ++s) {
      if (!(rows[c][s] > 0.0))
        throw ConfigError("from_weights: weights must be strictly positive");
      m.weights_[m.idx(c, s)] = rows[c][s];
    }
  }
  return m;
}

double BigramModel::prob(ContextId c, Symbol op) const {
  double sum = 0.0;
  std::size_t base = c * sig_->size();
  for (Symbol s = 0; s < sig_->size(); ++s) sum += weights_[base + s];
  return weights_[base + op] / sum;
}

std::string BigramModel::to_tsv() const {
  std::ostringstream out;
  for (ContextId c = 0; c < contexts_.count(); ++c) {
    out << contexts_.label(*sig_, c);
    for (Symbol s = 0; s < sig_->size(); ++s) out << '\t' << prob(c, s);
    out << '\n';
  }
  return out.str();
}

namespace {

void collect(const Term& t, const ContextTable& ctxs, ContextId ctx,
             std::vector<Contribution>& out) {
  out.push_back({ctx, t.op()});
  for (std::size_t i = 0; i < t.children().size(); ++i)
    collect(*t.child(i), ctxs, ctxs.child_context(t.op(), static_cast<unsigned>(i)),
            out);
}

}  // namespace

std::vector<Contribution> contributions(const Term& t) {
  ContextTable ctxs(t.sig());
  std::vector<Contribution> out;
  out.reserve(t.size());
  collect(t, ctxs, kRootContext, out);
  return out;
}

double prob_term(const BigramModel& m, const Term& t) {
  long double p = 1.0L;
  for (const Contribution& c : contributions(t)) p *= m.prob(c.context, c.op);
  return static_cast<double>(p);
}

BigramModel update(const BigramModel& m, const Term& better, const Term& worse,
                   const UpdateConfig& cfg) {
  BigramModel out = m;
  for (const Contribution& c : contributions(better))
    out.scale_raw(c.context, c.op, cfg.alpha);
  for (const Contribution& c : contributions(worse))
    out.scale_raw(c.context, c.op, 1.0 / cfg.alpha);
  return out;
}

}  // namespace lguess
