#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lguess/rng.hpp"
#include "lguess/term.hpp"

namespace lguess {

struct TaskSpec {
  unsigned n_d = 2;  // number of factor subsets
  unsigned n_v = 2;  // number of distinct variables
  std::uint64_t rng_seed = 1;
};

/// One factorization task: `start` is the scrambled unfolded sum; the goal is
/// any multiplication form. `reference_product` is the pre-unfold product,
/// kept for documentation; it is A valid answer, not THE answer.
struct Task {
  std::string id;
  TaskSpec spec;
  TermPtr start;
  TermPtr reference_product;
};

/// Four-stage generator: sample n_d random non-empty variable subsets,
/// multiply the sums, unfold the product into a right-nested sum of
/// monomials, then scramble with 3 x term_size random associative/commutative
/// rewrites at random positions. Fully determined by spec.rng_seed.
/// `sig` must expose at least n_v variables (defaults to poly_signature(5) so
/// whole datasets share one signature).
Task generate(const TaskSpec& spec, const Signature& sig);
Task generate(const TaskSpec& spec);

/// Multiplication form: no +-node has a *-descendant, i.e. the term is a
/// product of sum-of-variables factors (or a single factor).
bool is_goal(const Term& t);

/// Number of +-nodes whose subtree contains a *; the first component of the
/// factor-progress score (lower is better, ties by term size).
unsigned unfactored_sum_count(const Term& t);

/// Canonical polynomial form over the term's variables: multiset of
/// monomials with integer multiplicity, each monomial a sorted variable
/// multiset. Throws ConfigError on operators other than + and *.
using Monomial = std::vector<Symbol>;
std::map<Monomial, long long> poly_normal_form(const Term& t);
bool poly_equivalent(const Term& a, const Term& b);

/// per_cell tasks for every (n_d, n_v) cell in the inclusive ranges, task
/// seeds derived deterministically from master_seed.
std::vector<Task> build_dataset(unsigned nd_lo, unsigned nd_hi, unsigned nv_lo,
                                unsigned nv_hi, unsigned per_cell,
                                std::uint64_t master_seed, const Signature& sig);

/// One task per line: `id \t n_d \t n_v \t start \t reference`.
std::string dataset_to_tsv(const std::vector<Task>& tasks);
std::vector<Task> dataset_from_tsv(std::string_view text, const Signature& sig);
void dataset_to_file(const std::vector<Task>& tasks, const std::string& path);
std::vector<Task> dataset_from_file(const std::string& path, const Signature& sig);

}  // namespace lguess
