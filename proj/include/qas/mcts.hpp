#pragma once

#include <memory>

#include "qas/actions.hpp"
#include "qas/problems.hpp"

namespace qas {

// One search-tree node: a circuit with its visit statistics. Children are
// created one at a time, each with its first evaluation, so visit counts
// are always >= 1 below the root.
struct TreeNode {
    Circuit circuit;
    long long visits = 0;      // N_s
    double cumulative_reward = 0.0; // Q
    double cached_cost = 0.0;
    TreeNode* parent = nullptr;
    std::vector<std::pair<EditAction, std::unique_ptr<TreeNode>>> children;
};

// Q/N + c * sqrt(ln(N_parent) / N_child).
double ucb(const TreeNode& parent, const TreeNode& child, double exploration);

// Widening cap: the configured constant in ablation mode, else
// ceil(beta * max(N, 1)^alpha).
long long allowed_children(const TreeNode& node, const SearchConfig& cfg);

struct CommitRecord {
    long long iteration = 0;
    int tree_depth = 0; // committed chain length from the original root
};

struct SearchResult {
    std::vector<std::pair<Circuit, double>> best_path; // circuits with re-evaluated costs
    Circuit best_circuit;
    double best_cost = 0.0;
    std::vector<CommitRecord> commits;
    long long eval_count = 0;        // total simulations during the search phase
    long long root_eval_count = 0;   // the single start-of-search evaluation
    long long iteration_eval_count = 0; // expansions + roll-out evaluations
    long long path_eval_count = 0;   // best-path re-evaluations
    long long aborted_iterations = 0; // iterations lost to evaluation errors
    std::vector<double> iteration_log; // best-so-far cost after each iteration
};

// The search tree plus the state shared across iterations. Owns the root;
// `active` is the node search currently descends from (advanced by commits).
class SearchTree {
  public:
    SearchTree(const Problem& problem, const SearchConfig& cfg);

    // One full iteration: selection, expansion (a single sampled child with
    // its evaluation), optional roll-out, backpropagation up to the active
    // root. Returns the cost of the newly evaluated circuit(s)' best.
    double iterate();

    // Advances the active root to a child whose visits reached
    // commit_fraction * iterations (greatest N, ties by higher Q).
    bool maybe_commit();

    const TreeNode& root() const { return *root_; }
    TreeNode& root() { return *root_; }
    const TreeNode& active() const { return *active_; }
    long long completed_iterations() const { return completed_iterations_; }
    bool warmed() const { return warmed_; }
    Rng& rng() { return rng_; }

  private:
    TreeNode* select();
    void backpropagate(TreeNode* node, double reward);
    void note_circuit(const Circuit& circuit);

    const Problem& problem_;
    const SearchConfig& cfg_;
    Rng rng_;
    std::unique_ptr<TreeNode> root_;
    TreeNode* active_ = nullptr;
    bool warmed_ = false;
    long long completed_iterations_ = 0;
    double reward_min_ = 0.0, reward_max_ = 0.0; // running range for the optional normalization
    bool reward_range_set_ = false;
};

// Best path from the original root following argmax-Q children to a leaf,
// re-evaluating every circuit on it; the best circuit is the interior
// minimum, not necessarily the leaf.
std::vector<std::pair<Circuit, double>> best_path(const TreeNode& root, const Problem& problem);

// Runs `iterations` full iterations interleaved with commit checks and
// retrieves the best path. Deterministic for a fixed config and seed.
SearchResult search(const Problem& problem, const SearchConfig& cfg);

} // namespace qas
