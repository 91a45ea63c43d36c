"""Team formation: skill maps, the extended-graph reduction, greedy sizing."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tensionkit import (Graph, InfeasibleError, InputError, SkillMap,
                        community_solver, form_team, greedy_fixed_size,
                        proxy_weights, skill_extended_graph)
from tensionkit.community import PEEL_VARIANTS, TREE_VARIANTS

from conftest import (oracle_is_connected, oracle_tension,
                      random_graph_and_profiles)

ALL_SOLVERS = [("tree", v) for v in TREE_VARIANTS] + [("peel", v) for v in PEEL_VARIANTS]


# -- skill ingestion -----------------------------------------------------------

class TestSkillMap:
    def test_threshold_filters_holders(self):
        skills = SkillMap.from_counts(
            3, [(0, "db", 5), (1, "db", 3), (2, "ml", 4)], threshold=4)
        assert skills.labels == ("db", "ml")
        assert skills.holders_of("db") == {0}
        assert skills.holders_of("ml") == {2}

    def test_duplicate_entries_accumulate(self):
        skills = SkillMap.from_counts(
            2, [(0, "db", 2), (0, "db", 2)], threshold=4)
        assert skills.holders_of("db") == {0}

    def test_unknown_label_rejected(self):
        skills = SkillMap.from_counts(2, [(0, "db", 4)])
        with pytest.raises(InputError, match="unknown skill"):
            skills.index("ml")

    def test_node_out_of_range_rejected(self):
        with pytest.raises(InputError, match="outside the graph"):
            SkillMap.from_counts(2, [(5, "db", 4)])

    def test_nonpositive_threshold_rejected(self):
        with pytest.raises(InputError):
            SkillMap.from_counts(2, [(0, "db", 4)], threshold=0)


# -- extended graph --------------------------------------------------------------

class TestSkillExtendedGraph:
    def test_single_holder_adjacency(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3)])
        skills = SkillMap.from_counts(4, [(3, "db", 4)])
        ext, ids, ext_X = skill_extended_graph(g, skills, np.zeros((4, 1)))
        s = ids["db"]
        assert s == 4
        assert ext.neighbors(s) == [3]

    def test_two_holders_degree_two(self):
        g = Graph(3, [(0, 1), (1, 2)])
        skills = SkillMap.from_counts(3, [(0, "a", 4), (2, "a", 4)])
        ext, ids, _ = skill_extended_graph(g, skills, np.zeros((3, 1)))
        assert ext.degree(ids["a"]) == 2

    def test_skill_node_profile_is_holder_mean(self):
        g = Graph(3, [(0, 1), (1, 2)])
        X = np.array([[0.2], [0.4], [0.8]])
        skills = SkillMap.from_counts(3, [(0, "a", 4), (2, "a", 4)])
        _, ids, ext_X = skill_extended_graph(g, skills, X)
        assert ext_X[ids["a"], 0] == pytest.approx(0.5, abs=1e-15)

    def test_unheld_skill_gets_zero_profile(self):
        g = Graph(2, [(0, 1)])
        skills = SkillMap.from_counts(2, [(0, "a", 1), (0, "ghost", 1)], threshold=2)
        # "ghost" stays in the universe but nobody reaches the threshold
        skills = SkillMap(skills.labels, (frozenset({0}), frozenset()))
        _, ids, ext_X = skill_extended_graph(g, skills, np.full((2, 1), 0.9))
        assert ext_X[ids["ghost"], 0] == 0.0


# -- the two-step reduction -------------------------------------------------------

class TestFormTeam:
    def test_single_skill_single_holder(self):
        g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        X = np.random.default_rng(0).random((5, 1))
        skills = SkillMap.from_counts(5, [(2, "db", 4)])
        solver = community_solver("tree", "hops")
        team = form_team(g, X, skills, ["db"], solver)
        assert team.solution.sorted_nodes() == [2]

    def test_two_skills_same_holder(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3)])
        X = np.random.default_rng(1).random((4, 1))
        skills = SkillMap.from_counts(4, [(1, "a", 4), (1, "b", 4), (3, "a", 4)])
        solver = community_solver("tree", "hops")
        team = form_team(g, X, skills, ["a", "b"], solver)
        assert team.solution.sorted_nodes() == [1]

    def test_path_graph_two_end_skills(self):
        g = Graph(3, [(0, 1), (1, 2)])
        X = np.array([[0.1], [0.5], [0.9]])
        skills = SkillMap.from_counts(3, [(0, "a", 4), (2, "b", 4)])
        for algorithm, variant in ALL_SOLVERS:
            solver = community_solver(algorithm, variant, rng_seed=5)
            team = form_team(g, X, skills, ["a", "b"], solver)
            assert team.solution.sorted_nodes() == [0, 1, 2]
            assert team.step2_noop  # step 2 returns step 1's individuals

    def test_uncoverable_skill_rejected(self):
        g = Graph(2, [(0, 1)])
        # "zz" is in the universe but its count never reaches the threshold
        skills = SkillMap.from_counts(2, [(0, "a", 4), (1, "zz", 1)])
        solver = community_solver("tree", "hops")
        with pytest.raises(InfeasibleError, match="uncoverable skill"):
            form_team(g, np.zeros((2, 1)), skills, ["zz"], solver)

    def test_label_outside_universe_rejected(self):
        g = Graph(2, [(0, 1)])
        skills = SkillMap.from_counts(2, [(0, "a", 4)])
        solver = community_solver("tree", "hops")
        with pytest.raises(InputError, match="unknown skill"):
            form_team(g, np.zeros((2, 1)), skills, ["zz"], solver)

    def test_empty_project_rejected(self):
        g = Graph(2, [(0, 1)])
        skills = SkillMap.from_counts(2, [(0, "a", 4)])
        with pytest.raises(InputError):
            form_team(g, np.zeros((2, 1)), skills, [], community_solver("tree", "hops"))

    def test_step1_includes_unique_holders(self):
        # each required skill held by exactly one node: step 1 must pick them all
        g = Graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
        X = np.random.default_rng(2).random((6, 1))
        skills = SkillMap.from_counts(6, [(0, "a", 4), (5, "b", 4), (3, "c", 4)])
        solver = community_solver("tree", "hops")
        team = form_team(g, X, skills, ["a", "b", "c"], solver)
        assert {0, 3, 5} <= team.step1_individuals

    @given(st.integers(0, 100_000))
    @settings(max_examples=40)
    def test_coverage_and_original_graph_connectivity(self, seed):
        rng = np.random.default_rng(seed)
        g, X = random_graph_and_profiles(rng, 4, 18)
        n_skills = int(rng.integers(2, 5))
        entries = []
        for k in range(n_skills):
            holders = rng.choice(g.node_count,
                                 size=int(rng.integers(1, 4)), replace=False)
            entries.extend((int(h), f"s{k}", 4) for h in holders)
        skills = SkillMap.from_counts(g.node_count, entries)
        required = [f"s{k}" for k in range(int(rng.integers(1, n_skills + 1)))]
        algorithm, variant = ALL_SOLVERS[seed % len(ALL_SOLVERS)]
        solver = community_solver(algorithm, variant, rng_seed=seed)
        team = form_team(g, X, skills, required, solver)
        members = team.solution.nodes
        for label in required:
            assert members & skills.holders_of(label), f"{label} uncovered"
        assert oracle_is_connected(g.node_count, g.edges(), members)
        assert max(members) < g.node_count  # no scaffolding ids leak through


# -- fixed-size greedy -------------------------------------------------------------

class TestGreedyFixedSize:
    def test_k1_all_starts_returns_lowest_id(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3)])
        X = np.random.default_rng(3).random((4, 1))
        sol = greedy_fixed_size(g, X, 1)
        assert sol.sorted_nodes() == [0] and sol.tension == 0.0

    def test_k_equals_n_takes_whole_graph(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 2)])
        X = np.random.default_rng(4).random((4, 1))
        sol = greedy_fixed_size(g, X, 4)
        assert sol.sorted_nodes() == [0, 1, 2, 3]

    def test_four_path_picks_matching_pair(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3)])
        X = np.array([[0.0], [0.0], [1.0], [1.0]])
        sol = greedy_fixed_size(g, X, 2)
        assert sol.sorted_nodes() == [0, 1]
        assert sol.tension == pytest.approx(0.0, abs=1e-12)

    def test_k_larger_than_component_rejected(self):
        g = Graph(4, [(0, 1), (2, 3)])
        with pytest.raises(InfeasibleError, match="largest component"):
            greedy_fixed_size(g, np.zeros((4, 1)), 3)

    def test_k_below_one_rejected(self):
        g = Graph(2, [(0, 1)])
        with pytest.raises(InputError):
            greedy_fixed_size(g, np.zeros((2, 1)), 0)

    def test_sampled_start_mode_is_deterministic(self):
        rng = np.random.default_rng(9)
        g, X = random_graph_and_profiles(rng, 30, 30)
        a = greedy_fixed_size(g, X, 5, rng_seed=2, all_starts_limit=10, sampled_starts=4)
        b = greedy_fixed_size(g, X, 5, rng_seed=2, all_starts_limit=10, sampled_starts=4)
        assert a.nodes == b.nodes

    @given(st.integers(0, 100_000))
    @settings(max_examples=40)
    def test_exact_size_and_connected(self, seed):
        rng = np.random.default_rng(seed)
        g, X = random_graph_and_profiles(rng, 3, 16)
        k = int(rng.integers(1, g.node_count + 1))
        sol = greedy_fixed_size(g, X, k)
        assert len(sol.nodes) == k
        assert oracle_is_connected(g.node_count, g.edges(), sol.nodes)
        assert sol.tension == pytest.approx(
            oracle_tension(g.node_count, g.edges(), X, sol.nodes),
            rel=1e-7, abs=1e-10)


class TestCommunitySolverHandle:
    def test_unknown_algorithm_rejected(self):
        with pytest.raises(InputError, match="unknown algorithm"):
            community_solver("magic", "hops")

    def test_handle_passes_weights_through(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        X = np.array([[0.0], [0.1], [0.2], [0.9]])
        w = proxy_weights(g, X)
        solver = community_solver("tree", "weights")
        sol = solver(g, X, [0, 2], w)
        assert sol.sorted_nodes() == [0, 1, 2]
