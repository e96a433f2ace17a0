#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lguess/term.hpp"

namespace lguess {

/// Index of a bigram context. Context 0 is the root context; every other
/// context is a (parent operator, 1-based child index) pair.
using ContextId = std::uint32_t;

constexpr ContextId kRootContext = 0;

/// Maps (parent op, child index) pairs to dense context ids for a signature.
class ContextTable {
 public:
  explicit ContextTable(const Signature& sig);

  ContextId child_context(Symbol parent, unsigned index0) const {
    return offsets_[parent] + index0;
  }
  std::size_t count() const { return count_; }

  /// "_|_" for the root, "<op>_<i>" (1-based) otherwise.
  std::string label(const Signature& sig, ContextId c) const;

 private:
  std::vector<ContextId> offsets_;
  std::size_t count_;
};

struct UpdateConfig {
  explicit UpdateConfig(double alpha_);
  double alpha;
};

/// One (context, op) parameter occurrence of a term: the root node occurs
/// under the root context, every other node under (parent op, child index).
struct Contribution {
  ContextId context;
  Symbol op;
  bool operator==(const Contribution&) const = default;
};

/// The contextual bigram model gamma(op | context) over all signature
/// symbols. Internally raw positive weights, normalized on read, so repeated
/// comparison updates compose exactly. Models are values: update() returns a
/// new model.
class BigramModel {
 public:
  /// Uniform model: every entry 1/K, K = number of signature symbols.
  explicit BigramModel(const Signature& sig);

  /// Model with explicit per-(context, symbol) probabilities, e.g. copied
  /// from a printed table. Rows need not sum exactly to 1; they are treated
  /// as raw weights.
  static BigramModel from_weights(const Signature& sig,
                                  const std::vector<std::vector<double>>& rows);

  const Signature& sig() const { return *sig_; }
  const ContextTable& contexts() const { return contexts_; }

  /// Normalized probability gamma(op | context).
  double prob(ContextId c, Symbol op) const;

  double raw(ContextId c, Symbol op) const { return weights_[idx(c, op)]; }
  void scale_raw(ContextId c, Symbol op, double factor) {
    weights_[idx(c, op)] *= factor;
  }

  /// One row per context, tab-separated probabilities in signature order.
  std::string to_tsv() const;

 private:
  std::size_t idx(ContextId c, Symbol op) const { return c * sig_->size() + op; }

  const Signature* sig_;
  ContextTable contexts_;
  std::vector<double> weights_;
};

inline BigramModel default_model(const Signature& sig) { return BigramModel(sig); }

/// The (context, op) occurrences of every node of t, in preorder.
std::vector<Contribution> contributions(const Term& t);

/// Product over all nodes of gamma(op | context); the root node uses the
/// root context.
double prob_term(const BigramModel& m, const Term& t);

/// Multiplies each parameter by alpha once per occurrence in `better`,
/// divides by alpha once per occurrence in `worse`. Rows renormalize on
/// read; untouched rows are bit-identical to the input model.
BigramModel update(const BigramModel& m, const Term& better, const Term& worse,
                   const UpdateConfig& cfg);

}  // namespace lguess
