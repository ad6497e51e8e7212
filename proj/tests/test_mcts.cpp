#include <doctest.h>

#include <cmath>
#include <functional>

#include "qas/mcts.hpp"

using namespace qas;

namespace {

std::shared_ptr<EvalCounter> counter() { return std::make_shared<EvalCounter>(); }

// 2-qubit toy problem, cheap enough for tens of thousands of iterations.
VqeProblem toy_problem(std::shared_ptr<EvalCounter> c) {
    return VqeProblem(parse_hamiltonian("1.0 ZZ\n0.3 XI\n"), std::nullopt, std::move(c));
}

SearchConfig toy_config(long long iterations, std::uint64_t seed) {
    SearchConfig cfg;
    cfg.iterations = iterations;
    cfg.seed = seed;
    return cfg;
}

void audit_widening(const TreeNode& node, const SearchConfig& cfg,
                    const std::function<void(const TreeNode&)>& check) {
    check(node);
    for (const auto& [action, child] : node.children)
        audit_widening(*child, cfg, check);
}

TreeNode* add_child(TreeNode& parent, long long visits, double q) {
    auto child = std::make_unique<TreeNode>();
    child->circuit = parent.circuit;
    child->visits = visits;
    child->cumulative_reward = q;
    child->parent = &parent;
    TreeNode* out = child.get();
    parent.children.emplace_back(EditAction{ActionKind::Add, Gate::h(0), -1, 0.0},
                                 std::move(child));
    return out;
}

} // namespace

TEST_CASE("ucb arithmetic") {
    TreeNode parent;
    parent.circuit = root_circuit(1);
    parent.visits = 4;
    TreeNode* child = add_child(parent, 2, 1.0);

    CHECK(ucb(parent, *child, 0.4) ==
          doctest::Approx(0.5 + 0.4 * std::sqrt(std::log(4.0) / 2.0)).epsilon(1e-12));
    CHECK(ucb(parent, *child, 0.4) == doctest::Approx(0.8330).epsilon(1e-4));
    CHECK(ucb(parent, *child, 0.0) == doctest::Approx(0.5));

    // equal mean reward, fewer visits -> strictly larger bonus
    TreeNode* heavy = add_child(parent, 4, 2.0);
    CHECK(ucb(parent, *child, 0.4) > ucb(parent, *heavy, 0.4));

    TreeNode fresh;
    fresh.visits = 0;
    CHECK_THROWS_AS(ucb(parent, fresh, 0.4), Error);
}

TEST_CASE("allowed_children follows ceil(beta * N^alpha)") {
    SearchConfig cfg;
    TreeNode node;
    node.visits = 1;
    CHECK(allowed_children(node, cfg) == 1);
    node.visits = 10;
    CHECK(allowed_children(node, cfg) == 2);
    node.visits = 100;
    CHECK(allowed_children(node, cfg) == 4);
    node.visits = 0; // unvisited nodes can host one child
    CHECK(allowed_children(node, cfg) == 1);

    cfg.fixed_branching = 25;
    node.visits = 100000;
    CHECK(allowed_children(node, cfg) == 25);
}

TEST_CASE("first iteration expands exactly one root child") {
    auto c = counter();
    VqeProblem problem = toy_problem(c);
    SearchConfig cfg = toy_config(10, 42);
    SearchTree tree(problem, cfg);
    CHECK(c->total() == 1); // root evaluation

    tree.iterate();
    CHECK(tree.root().visits == 1);
    CHECK(tree.root().children.size() == 1);
    CHECK(c->total() == 2);

    // r=0: every further iteration adds exactly one evaluation
    for (int i = 0; i < 5; ++i)
        tree.iterate();
    CHECK(c->total() == 7);
}

TEST_CASE("the widening bound holds at every node after a search") {
    auto c = counter();
    VqeProblem problem = toy_problem(c);
    SearchConfig cfg = toy_config(2000, 7);
    SearchTree tree(problem, cfg);
    for (int i = 0; i < 2000; ++i) {
        tree.iterate();
        tree.maybe_commit();
    }
    audit_widening(tree.root(), cfg, [&](const TreeNode& node) {
        const long long cap = static_cast<long long>(
            std::ceil(std::pow(static_cast<double>(std::max<long long>(node.visits, 1)), 0.3)));
        CHECK(static_cast<long long>(node.children.size()) <= cap);
    });
}

TEST_CASE("visit counts are conserved down the tree") {
    auto c = counter();
    VqeProblem problem = toy_problem(c);
    SearchConfig cfg = toy_config(500, 11);
    SearchTree tree(problem, cfg);
    for (int i = 0; i < 500; ++i)
        tree.iterate(); // no commits: root accumulates every iteration

    CHECK(tree.root().visits == 500);
    audit_widening(tree.root(), cfg, [](const TreeNode& node) {
        long long child_sum = 0;
        for (const auto& [action, child] : node.children)
            child_sum += child->visits;
        CHECK(node.visits >= child_sum);
        CHECK(node.visits >= static_cast<long long>(node.children.size()));
    });
}

TEST_CASE("maybe_commit thresholds on visits with q tie-break") {
    auto c = counter();
    VqeProblem problem = toy_problem(c);
    SearchConfig cfg = toy_config(1000, 1); // rho * I = 50
    SearchTree tree(problem, cfg);

    TreeNode& root = tree.root();
    add_child(root, 49, 10.0);
    CHECK_FALSE(tree.maybe_commit());

    TreeNode* fifty = add_child(root, 50, 10.0);
    CHECK(tree.maybe_commit());
    CHECK(&tree.active() == fifty);
}

TEST_CASE("maybe_commit prefers higher visits, then higher q") {
    auto c = counter();
    VqeProblem problem = toy_problem(c);
    SearchConfig cfg = toy_config(100, 1); // threshold 5
    SearchTree tree(problem, cfg);

    TreeNode& root = tree.root();
    add_child(root, 30, 1.0);
    TreeNode* winner = add_child(root, 40, 1.0);
    CHECK(tree.maybe_commit());
    CHECK(&tree.active() == winner);

    // fresh tree: equal visits, higher q wins
    SearchTree tree2(problem, cfg);
    TreeNode& root2 = tree2.root();
    add_child(root2, 40, 1.0);
    TreeNode* rich = add_child(root2, 40, 2.0);
    CHECK(tree2.maybe_commit());
    CHECK(&tree2.active() == rich);
}

TEST_CASE("best_path follows argmax cumulative reward to a leaf") {
    auto c = counter();
    VqeProblem problem = toy_problem(c);

    SUBCASE("single node tree") {
        SearchConfig cfg = toy_config(10, 3);
        SearchTree tree(problem, cfg);
        const auto path = best_path(tree.root(), problem);
        REQUIRE(path.size() == 1);
        CHECK(path[0].first == tree.root().circuit);
    }

    SUBCASE("hand-built three-level tree") {
        SearchConfig cfg = toy_config(10, 3);
        SearchTree tree(problem, cfg);
        TreeNode& root = tree.root();
        TreeNode* a = add_child(root, 5, 10.0);
        TreeNode* b = add_child(root, 5, 12.0); // higher Q wins even with equal visits
        (void)a;
        TreeNode* b1 = add_child(*b, 2, 3.0);
        TreeNode* b2 = add_child(*b, 2, 5.0);
        (void)b1;

        const auto path = best_path(root, problem);
        REQUIRE(path.size() == 3);
        CHECK(path[1].first == b->circuit);
        CHECK(path[2].first == b2->circuit);
    }
}

TEST_CASE("search returns the interior minimum of the best path") {
    // the best circuit is chosen by re-evaluated cost; with non-monotone
    // costs along the path the minimum may sit strictly inside
    auto c = counter();
    VqeProblem problem = toy_problem(c);
    SearchConfig cfg = toy_config(300, 17);
    const SearchResult result = search(problem, cfg);
    double minimum = result.best_path.front().second;
    for (const auto& [circuit, cost] : result.best_path)
        minimum = std::min(minimum, cost);
    CHECK(result.best_cost == minimum);
    CHECK(metrics(result.best_circuit).gate_count >= 0);
}

TEST_CASE("search is deterministic for a fixed seed") {
    SearchConfig cfg = toy_config(400, 23);
    auto run = [&] {
        auto c = counter();
        VqeProblem problem = toy_problem(c);
        return search(problem, cfg);
    };
    const SearchResult a = run();
    const SearchResult b = run();
    CHECK(a.best_cost == b.best_cost);
    CHECK(a.best_circuit == b.best_circuit);
    CHECK(a.eval_count == b.eval_count);
    REQUIRE(a.iteration_log.size() == b.iteration_log.size());
    for (std::size_t i = 0; i < a.iteration_log.size(); ++i)
        CHECK(a.iteration_log[i] == b.iteration_log[i]);
    REQUIRE(a.best_path.size() == b.best_path.size());
    for (std::size_t i = 0; i < a.best_path.size(); ++i) {
        CHECK(a.best_path[i].first == b.best_path[i].first);
        CHECK(a.best_path[i].second == b.best_path[i].second);
    }
}

TEST_CASE("eval accounting: root + iterations + path re-evaluations") {
    auto c = counter();
    VqeProblem problem = toy_problem(c);
    SearchConfig cfg = toy_config(250, 29);
    const SearchResult result = search(problem, cfg);
    CHECK(result.root_eval_count == 1);
    CHECK(result.iteration_eval_count == cfg.iterations);
    CHECK(result.path_eval_count == static_cast<long long>(result.best_path.size()));
    CHECK(result.eval_count ==
          1 + cfg.iterations + static_cast<long long>(result.best_path.size()));
    CHECK(result.eval_count == c->total());
    CHECK(result.eval_count >= cfg.iterations);
}

TEST_CASE("roll-out steps add evaluations without adding nodes") {
    auto c = counter();
    VqeProblem problem = toy_problem(c);
    SearchConfig cfg = toy_config(50, 31);
    cfg.rollout_steps = 3;
    SearchTree tree(problem, cfg);
    const long long before = c->total();
    tree.iterate();
    CHECK(c->total() - before == 1 + cfg.rollout_steps);
    CHECK(tree.root().children.size() == 1);
    CHECK(tree.root().children[0].second->children.empty());
}

TEST_CASE("best-so-far iteration log is non-increasing") {
    auto c = counter();
    VqeProblem problem = toy_problem(c);
    SearchConfig cfg = toy_config(600, 37);
    const SearchResult result = search(problem, cfg);
    REQUIRE(result.iteration_log.size() == 600);
    for (std::size_t i = 1; i < result.iteration_log.size(); ++i)
        CHECK(result.iteration_log[i] <= result.iteration_log[i - 1]);
}

TEST_CASE("argmax child is invariant under constant reward shifts at equal visits") {
    // with equal visit counts the exploration bonus is a shared constant,
    // so shifting all Q by c*N moves every UCB by the same amount
    auto c = counter();
    VqeProblem problem = toy_problem(c);
    SearchConfig cfg = toy_config(10, 41);
    SearchTree tree(problem, cfg);
    TreeNode& root = tree.root();
    root.visits = 9;
    add_child(root, 3, 1.1);
    add_child(root, 3, 2.9);
    add_child(root, 3, 0.4);

    auto argmax = [&] {
        int best = -1;
        double best_value = -1e300;
        for (int i = 0; i < 3; ++i) {
            const double v = ucb(root, *root.children[static_cast<std::size_t>(i)].second, 0.4);
            if (v > best_value) {
                best_value = v;
                best = i;
            }
        }
        return best;
    };
    const int before = argmax();
    const double shift = 5.25;
    for (auto& [action, child] : root.children)
        child->cumulative_reward += shift * static_cast<double>(child->visits);
    CHECK(argmax() == before);
}

TEST_CASE("reward accounting is reproducible bit-for-bit") {
    SearchConfig cfg = toy_config(150, 43);
    auto total_q = [&] {
        auto c = counter();
        VqeProblem problem = toy_problem(c);
        SearchTree tree(problem, cfg);
        for (int i = 0; i < 150; ++i) {
            tree.iterate();
            tree.maybe_commit();
        }
        double sum = 0.0;
        audit_widening(tree.root(), cfg,
                       [&](const TreeNode& n) { sum += n.cumulative_reward; });
        return sum;
    };
    CHECK(total_q() == total_q());
}

namespace {

// cost defined only near the |+> axis of qubit 0: evaluations elsewhere fail
class PartialProblem final : public Problem {
  public:
    explicit PartialProblem(std::shared_ptr<EvalCounter> c)
        : Problem(2, std::nullopt, std::move(c)) {
        PauliString x = PauliString::identity(2);
        x.letters[0] = PauliLetter::X;
        observable_.terms.push_back({Complex(1.0), x});
    }
    double reward_from_cost(double cost) const override { return -cost; }

  private:
    double cost_of_state(const StateVector& state) const override {
        const double value = pauli_sum_expectation(state, observable_);
        if (value < 0.5)
            raise(ErrorCode::Observable, "cost undefined for this state");
        return -value;
    }
    double cost_of_density(const DensityMatrix&) const override {
        raise(ErrorCode::Observable, "no noisy path in this fixture");
    }
    PauliSum observable_;
};

} // namespace

TEST_CASE("failed evaluations abort single iterations, not the search") {
    auto c = counter();
    PartialProblem problem(c);
    SearchConfig cfg = toy_config(200, 53);
    const SearchResult result = search(problem, cfg);
    CHECK(result.aborted_iterations > 0);
    CHECK(result.aborted_iterations < 200);
    CHECK(result.iteration_log.size() == 200);
    CHECK(result.best_cost <= -0.5);

    // aborted iterations are deterministic too
    auto c2 = counter();
    PartialProblem problem2(c2);
    const SearchResult again = search(problem2, cfg);
    CHECK(again.aborted_iterations == result.aborted_iterations);
    CHECK(again.best_cost == result.best_cost);
}

TEST_CASE("fixed branching caps the children of every node") {
    auto c = counter();
    VqeProblem problem = toy_problem(c);
    SearchConfig cfg = toy_config(1500, 47);
    cfg.fixed_branching = 5;
    SearchTree tree(problem, cfg);
    for (int i = 0; i < 1500; ++i) {
        tree.iterate();
        tree.maybe_commit();
    }
    audit_widening(tree.root(), cfg, [](const TreeNode& node) {
        CHECK(node.children.size() <= 5);
    });
}
