#include "qas/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qas {

double ucb(const TreeNode& parent, const TreeNode& child, double exploration) {
    if (child.visits < 1 || parent.visits < 1)
        raise(ErrorCode::Internal, "UCB on an unvisited node");
    const double exploitation =
        child.cumulative_reward / static_cast<double>(child.visits);
    const double bonus =
        exploration * std::sqrt(std::log(static_cast<double>(parent.visits)) /
                                static_cast<double>(child.visits));
    return exploitation + bonus;
}

long long allowed_children(const TreeNode& node, const SearchConfig& cfg) {
    if (cfg.fixed_branching)
        return *cfg.fixed_branching;
    const double base = static_cast<double>(std::max<long long>(node.visits, 1));
    return static_cast<long long>(std::ceil(cfg.pw_coefficient * std::pow(base, cfg.pw_exponent)));
}

SearchTree::SearchTree(const Problem& problem, const SearchConfig& cfg)
    : problem_(problem), cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate();
    root_ = std::make_unique<TreeNode>();
    root_->circuit = root_circuit(problem_.qubit_count());
    root_->cached_cost = problem_.cost(root_->circuit);
    active_ = root_.get();
    note_circuit(root_->circuit);
}

void SearchTree::note_circuit(const Circuit& circuit) {
    if (!warmed_ &&
        static_cast<int>(circuit.gates.size()) >= 2 * problem_.qubit_count())
        warmed_ = true;
}

TreeNode* SearchTree::select() {
    TreeNode* node = active_;
    while (static_cast<long long>(node->children.size()) >= allowed_children(*node, cfg_)) {
        if (node->children.empty())
            raise(ErrorCode::Internal, "widening cap below 1 during selection");
        TreeNode* best = nullptr;
        double best_value = -std::numeric_limits<double>::infinity();
        for (auto& [action, child] : node->children) {
            const double value = ucb(*node, *child, cfg_.exploration);
            if (value > best_value) {
                best_value = value;
                best = child.get();
            }
        }
        node = best;
    }
    return node;
}

void SearchTree::backpropagate(TreeNode* node, double reward) {
    if (cfg_.normalize_rewards) {
        if (!reward_range_set_) {
            reward_min_ = reward_max_ = reward;
            reward_range_set_ = true;
        } else {
            reward_min_ = std::min(reward_min_, reward);
            reward_max_ = std::max(reward_max_, reward);
        }
        const double span = reward_max_ - reward_min_;
        reward = span > 0.0 ? (reward - reward_min_) / span : 0.0;
    }
    for (TreeNode* cur = node;; cur = cur->parent) {
        cur->visits += 1;
        cur->cumulative_reward += reward;
        if (cur == active_ || cur->parent == nullptr)
            break;
    }
}

double SearchTree::iterate() {
    // (1) Selection: stop at the first node whose widening cap leaves room.
    TreeNode* node = select();

    // (2) Expansion: one sampled child, evaluated once.
    const ActionDistribution dist =
        effective_distribution(node->circuit, cfg_.action_probs, cfg_, warmed_);
    const EditAction action = sample_action(node->circuit, dist, rng_, cfg_.angle_deviation);
    auto child = std::make_unique<TreeNode>();
    child->circuit = apply_action(node->circuit, action);
    child->parent = node;
    child->cached_cost = problem_.cost(child->circuit);
    note_circuit(child->circuit);

    double best_cost = child->cached_cost;
    double best_reward = problem_.reward_from_cost(child->cached_cost);

    // (3) Roll-out (disabled by default): further random edits evaluated but
    // never stored; the iteration's reward is the best one encountered.
    Circuit scratch = child->circuit;
    for (int step = 0; step < cfg_.rollout_steps; ++step) {
        const ActionDistribution roll_dist =
            effective_distribution(scratch, cfg_.action_probs, cfg_, warmed_);
        const EditAction roll_action =
            sample_action(scratch, roll_dist, rng_, cfg_.angle_deviation);
        scratch = apply_action(scratch, roll_action);
        const double cost = problem_.cost(scratch);
        note_circuit(scratch);
        best_cost = std::min(best_cost, cost);
        best_reward = std::max(best_reward, problem_.reward_from_cost(cost));
    }

    // (4) Backpropagation up to the active root.
    TreeNode* created = child.get();
    node->children.emplace_back(action, std::move(child));
    backpropagate(created, best_reward);

    ++completed_iterations_;
    return best_cost;
}

bool SearchTree::maybe_commit() {
    if (active_->children.empty())
        return false;
    const double threshold =
        cfg_.commit_fraction * static_cast<double>(cfg_.iterations);
    TreeNode* chosen = nullptr;
    for (auto& [action, child] : active_->children) {
        if (static_cast<double>(child->visits) < threshold)
            continue;
        if (!chosen || child->visits > chosen->visits ||
            (child->visits == chosen->visits &&
             child->cumulative_reward > chosen->cumulative_reward))
            chosen = child.get();
    }
    if (!chosen)
        return false;
    active_ = chosen;
    return true;
}

std::vector<std::pair<Circuit, double>> best_path(const TreeNode& root, const Problem& problem) {
    std::vector<std::pair<Circuit, double>> path;
    const TreeNode* node = &root;
    while (true) {
        path.emplace_back(node->circuit, problem.cost(node->circuit));
        if (node->children.empty())
            break;
        const TreeNode* best = nullptr;
        double best_q = -std::numeric_limits<double>::infinity();
        for (const auto& [action, child] : node->children) {
            if (child->cumulative_reward > best_q) {
                best_q = child->cumulative_reward;
                best = child.get();
            }
        }
        node = best;
    }
    return path;
}

SearchResult search(const Problem& problem, const SearchConfig& cfg) {
    const long long before = problem.counter().total();
    SearchTree tree(problem, cfg);
    const long long after_root = problem.counter().total();

    SearchResult result;
    result.iteration_log.reserve(static_cast<std::size_t>(cfg.iterations));
    double best_so_far = tree.root().cached_cost;
    for (long long i = 0; i < cfg.iterations; ++i) {
        try {
            best_so_far = std::min(best_so_far, tree.iterate());
        } catch (const Error& e) {
            // a degenerate distribution is a configuration problem; a failed
            // evaluation only loses this iteration
            if (e.code() == ErrorCode::Sampling || e.code() == ErrorCode::Internal)
                throw;
            ++result.aborted_iterations;
        }
        result.iteration_log.push_back(best_so_far);
        if (tree.maybe_commit()) {
            CommitRecord record;
            record.iteration = tree.completed_iterations();
            int depth = 0;
            for (const TreeNode* n = &tree.active(); n->parent != nullptr; n = n->parent)
                ++depth;
            record.tree_depth = depth;
            result.commits.push_back(record);
        }
    }
    const long long after_iterations = problem.counter().total();

    result.best_path = best_path(tree.root(), problem);
    const long long after_path = problem.counter().total();

    std::size_t best_index = 0;
    for (std::size_t i = 1; i < result.best_path.size(); ++i)
        if (result.best_path[i].second < result.best_path[best_index].second)
            best_index = i;
    result.best_circuit = result.best_path[best_index].first;
    result.best_cost = result.best_path[best_index].second;

    result.root_eval_count = after_root - before;
    result.iteration_eval_count = after_iterations - after_root;
    result.path_eval_count = after_path - after_iterations;
    result.eval_count = after_path - before;
    return result;
}

} // namespace qas
