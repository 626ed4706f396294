// Copyright 2026 The hamkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Circuit IR, state-vector simulation and resource counting.

#include <gtest/gtest.h>

#include <chrono>
#include <numbers>
#include <random>

#include "hamkit/circuit.hpp"
#include "hamkit/io.hpp"
#include "hamkit/resources.hpp"
#include "hamkit/spin_models.hpp"
#include "hamkit/statevector.hpp"
#include "support/oracles.hpp"

using namespace hamkit;
using oracle::cplx;
using K = GateKind;

namespace {

constexpr double kPi = std::numbers::pi;

PauliString ps(const char *s) { return PauliString::parse(s); }

StateVector from_vec(const oracle::Vec &v) { return StateVector::from_eigen(v); }

double vec_diff(const StateVector &a, const oracle::Vec &b) {
    return (a.to_eigen() - b).cwiseAbs().maxCoeff();
}

std::vector<Gate> all_kinds(std::size_t q0, std::size_t q1) {
    return {Gate::single(K::H, q0),   Gate::single(K::S, q0),  Gate::single(K::Sdg, q0),
            Gate::single(K::X, q0),   Gate::single(K::Y, q0),  Gate::single(K::Z, q0),
            Gate::single(K::T, q0),   Gate::single(K::Tdg, q0), Gate::rz(q0, 0.73),
            Gate::cx(q0, q1),         Gate::cx(q1, q0),        Gate::cz(q0, q1),
            Gate{K::PauliRotation, {q0, q1}, 1.1, {Pauli::X, Pauli::Y}},
            Gate{K::PauliRotation, {q1, q0}, -0.4, {Pauli::Z, Pauli::Z}},
            Gate::pauli_rotation(ps("Y"), 2.2, q1),
            Gate::pauli_rotation(ps("I"), 0.9, q0)};
}

} // namespace

// ---- algo-ir ----

TEST(AlgorithmGraph, StructuralErrors) {
    AlgorithmGraph g(3);
    EXPECT_THROW(g.add_definition("self", {Call{0, 1, {}}}), InputError);
    try {
        g.add_definition("self", {Call{0, 1, {}}});
    } catch (const InputError &e) {
        EXPECT_NE(std::string(e.what()).find("cycle"), std::string::npos);
    }
    EXPECT_THROW(g.add_definition("dangling", {Call{5, 1, {}}}), InputError);
    const auto empty = g.add_definition("empty", {});
    EXPECT_THROW(g.add_definition("zero", {Call{empty, 0, {}}}), InputError);
    EXPECT_THROW(g.add_definition("range", {Gate::single(K::H, 3)}), InputError);
    EXPECT_THROW(g.add_definition("dup", {Gate::cx(1, 1)}), InputError);
    EXPECT_THROW(g.add_definition("empty", {}), InputError);
    const auto h1 = g.add_definition("h1", {Gate::single(K::H, 1)});
    EXPECT_THROW(g.add_definition("overlap", {Call{h1, 1, {1}}}), InputError);
    EXPECT_THROW(g.add_definition("two", {Call{h1, 1, {0, 2}}}), InputError);
    const auto ch = g.add_definition("ch", {Call{h1, 1, {0}}});
    EXPECT_THROW(g.add_definition("nested", {Call{ch, 1, {2}}}), InputError);
    EXPECT_THROW(g.set_root(99), InputError);
    EXPECT_THROW((void)AlgorithmGraph(2).root(), InputError);
}

TEST(AlgorithmGraph, SharedSubDefinitionsAreLegal) {
    AlgorithmGraph g(2);
    const auto a = g.add_definition("a", {Gate::single(K::H, 0)});
    const auto b = g.add_definition("b", {Call{a, 2, {}}});
    const auto c = g.add_definition("c", {Call{a, 1, {1}}});
    g.set_root(g.add_definition("root", {Call{b, 1, {}}, Call{c, 1, {}}}));
    EXPECT_EQ(flattened_size(g), 2u + lower_controlled(Gate::single(K::H, 0), 1).size());
}

TEST(Flatten, Examples) {
    AlgorithmGraph g(1);
    const auto d = g.add_definition("d", {Gate::single(K::H, 0)});
    g.set_root(g.add_definition("root", {Call{d, 3, {}}}));
    const auto flat = flatten(g);
    ASSERT_EQ(flat.size(), 3u);
    for (const auto &gate : flat) {
        EXPECT_EQ(gate, Gate::single(K::H, 0));
    }

    AlgorithmGraph nested(1);
    const auto h = nested.add_definition("h", {Gate::single(K::H, 0)});
    const auto inner = nested.add_definition("inner", {Call{h, 2, {}}});
    nested.set_root(nested.add_definition("outer", {Call{inner, 4, {}}}));
    EXPECT_EQ(flatten(nested).size(), 8u);
    EXPECT_THROW((void)flatten(nested, 7), CapExceeded);
}

TEST(Flatten, ControlledRzMatchesExactControlledRotation) {
    AlgorithmGraph g(2);
    const auto rz = g.add_definition("rz", {Gate::rz(1, 0.81)});
    g.set_root(g.add_definition("root", {Call{rz, 1, {0}}}));
    const auto flat = flatten(g);
    ASSERT_EQ(flat.size(), 4u);
    EXPECT_EQ(count_gates(flat), (ResourceCounts{2, 0, 2, 0}));
    const oracle::Mat want =
        oracle::controlled(oracle::gate_unitary(Gate::rz(1, 0.81), 2), 0, 2);
    // exact, not just up to phase
    EXPECT_LT((oracle::circuit_unitary(flat, 2) - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LowerControlled, EveryKindMatchesControlledUnitaryUpToGlobalPhase) {
    const std::size_t n = 3;
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t q0 = (c + 1) % n;
        const std::size_t q1 = (c + 2) % n;
        for (const Gate &g : all_kinds(q0, q1)) {
            const oracle::Mat want = oracle::controlled(oracle::gate_unitary(g, n), c, n);
            const oracle::Mat got = oracle::circuit_unitary(lower_controlled(g, c), n);
            EXPECT_LT(oracle::distance_up_to_phase(got, want), 1e-12)
                << gate_name(g.kind) << " control " << c;
        }
    }
}

TEST(LowerControlled, ResourceTableMatchesSequences) {
    for (const Gate &g : all_kinds(1, 2)) {
        EXPECT_EQ(count_gates(lower_controlled(g, 0)), lower_gate(g, true))
            << gate_name(g.kind);
    }
}

TEST(GraphJson, OrderIndependentForUnrelatedDefinitions) {
    auto build = [](bool swap) {
        AlgorithmGraph g(2);
        DefinitionId a = 0;
        DefinitionId b = 0;
        if (swap) {
            b = g.add_definition("b", {Gate::rz(1, 0.5)});
            a = g.add_definition("a", {Gate::single(K::H, 0)});
        } else {
            a = g.add_definition("a", {Gate::single(K::H, 0)});
            b = g.add_definition("b", {Gate::rz(1, 0.5)});
        }
        g.set_root(g.add_definition("root", {Call{a, 2, {}}, Call{b, 1, {0}}}));
        return graph_to_json(g).dump();
    };
    EXPECT_EQ(build(false), build(true));
}

// ---- statevec-sim ----

TEST(StateVector, Examples) {
    auto psi = StateVector::basis(1, 0);
    psi.apply(Gate::single(K::H, 0));
    EXPECT_NEAR(psi[0].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(psi[1].real(), 1 / std::sqrt(2.0), 1e-15);

    auto z = StateVector::basis(1, 0);
    z.apply(Gate::pauli_rotation(ps("Z"), 0.7));
    EXPECT_LT(std::abs(z[0] - std::polar(1.0, -0.35)), 1e-15);
    EXPECT_LT(std::abs(z[1]), 1e-15);
}

TEST(StateVector, GateKernelsMatchDenseUnitaries) {
    std::mt19937_64 rng(41);
    const std::size_t n = 4;
    for (int trial = 0; trial < 300; ++trial) {
        const Gate g = oracle::random_gate(rng, n);
        const oracle::Vec v = oracle::random_state(rng, n);
        auto psi = from_vec(v);
        psi.apply(g);
        EXPECT_LT(vec_diff(psi, oracle::gate_unitary(g, n) * v), 1e-12) << gate_name(g.kind);
        EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    }
}

TEST(StateVector, NestedRunEqualsFlattenedRunAndKeepsNorm) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const auto g = oracle::random_graph(rng, n, 4);
        const oracle::Vec v = oracle::random_state(rng, n);
        const auto nested = run(g, from_vec(v));
        const auto flat = run_gates(flatten(g), from_vec(v));
        EXPECT_LT(state_distance(nested, flat), 1e-12);
        EXPECT_NEAR(nested.norm(), 1.0, 1e-10);
        // and the lowering is the exact unitary of the nested semantics
        EXPECT_LT(vec_diff(nested, oracle::circuit_unitary(flatten(g), n) * v), 1e-10);
    }
}

TEST(StateVector, CapsAndMismatches) {
    AlgorithmGraph g(2);
    g.set_root(g.add_definition("r", {Gate::single(K::H, 0)}));
    EXPECT_THROW((void)run(g, StateVector::basis(3, 0)), InputError);
    EXPECT_THROW((void)StateVector::basis(21, 0), CapExceeded);
    SimulationCaps caps;
    caps.max_gates = 0;
    EXPECT_THROW((void)run(g, StateVector::basis(2, 0), caps), CapExceeded);
    EXPECT_THROW((void)StateVector::from_amplitudes({1.0, 1.0}), InputError);
    EXPECT_THROW((void)StateVector::from_bitstring("01a"), InputError);
}

TEST(Fidelity, Examples) {
    std::mt19937_64 rng(43);
    const oracle::Vec v = oracle::random_state(rng, 3);
    EXPECT_NEAR(fidelity(from_vec(v), from_vec(v)), 1.0, 1e-14);
    EXPECT_NEAR(fidelity(StateVector::basis(2, 1), StateVector::basis(2, 2)), 0.0, 1e-15);
    EXPECT_NEAR(fidelity(from_vec(v), from_vec(std::polar(1.0, 1.3) * v)), 1.0, 1e-14);
    EXPECT_THROW((void)fidelity(StateVector::basis(1, 0), StateVector::basis(2, 0)),
                 InputError);
}

TEST(ExactEvolution, Examples) {
    PauliSum z(1);
    z.add(1.0, ps("Z"));
    auto plus = StateVector::basis(1, 0);
    plus.apply(Gate::single(K::H, 0));
    auto minus = StateVector::basis(1, 1);
    minus.apply(Gate::single(K::H, 0));
    // exp(-i Z pi/2) = -i diag(1, -1) sends |+> to |->; at t = pi it is -I
    EXPECT_NEAR(fidelity(exact_evolution(z, kPi / 2, plus), minus), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(exact_evolution(z, kPi, plus), plus), 1.0, 1e-12);

    std::mt19937_64 rng(44);
    const auto h = oracle::random_hermitian(rng, 3, 6);
    const oracle::Vec v = oracle::random_state(rng, 3);
    EXPECT_LT(vec_diff(exact_evolution(h, 0.0, from_vec(v)), v), 1e-12);
    EXPECT_LT(vec_diff(exact_evolution(h, 0.7, from_vec(v)),
                       oracle::expm_hermitian(oracle::dense(h), 0.7) * v),
              1e-10);
    PauliSum nh(1);
    nh.add(cplx(0, 1), ps("X"));
    EXPECT_THROW((void)exact_evolution(nh, 1.0, plus), InputError);
}

TEST(Eigendecompose, Examples) {
    PauliSum z(1);
    z.add(1.0, ps("Z"));
    const auto ez = eigendecompose(z);
    EXPECT_NEAR(ez.values(0), -1.0, 1e-14);
    EXPECT_NEAR(ez.values(1), 1.0, 1e-14);

    PauliSum x(1);
    x.add(1.0, ps("X"));
    const auto ex = eigendecompose(x);
    // eigenvector of -1 is |->, of +1 is |+>, up to phase
    EXPECT_NEAR(std::abs(ex.vectors(0, 0)), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(std::abs(ex.vectors(0, 0) + ex.vectors(1, 0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(ex.vectors(0, 1) - ex.vectors(1, 1)), 0.0, 1e-12);

    const auto xxz = generate({SpinModel::xxz_chain, 2, 1.0, 1.0, Boundary::open});
    const auto e = eigendecompose(xxz);
    const double want[] = {-3, 1, 1, 1};
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(e.values(k), want[k], 1e-12);
    }
}

TEST(Eigendecompose, ReconstructsRandomHamiltonians) {
    std::mt19937_64 rng(45);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = oracle::random_hermitian(rng, 1 + trial % 5, 8);
        const auto e = eigendecompose(h);
        const oracle::Mat rec =
            e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
        EXPECT_LT((rec - oracle::dense(h)).cwiseAbs().maxCoeff(), 1e-9);
        for (Eigen::Index k = 1; k < e.values.size(); ++k) {
            EXPECT_LE(e.values(k - 1), e.values(k));
        }
    }
}

TEST(QpeAnalytic, KernelExamples) {
    // eigenstate with exact phase k*/2^m gives a point mass
    PauliSum z(1);
    z.add(1.0, ps("Z"));
    const std::size_t m = 4;
    // E = -1 for |1>; choose shift and t so theta = 5/16
    const double shift = 2.0;
    const double t = 2 * kPi * (5.0 / 16.0) / (-1.0 + shift);
    const auto p = qpe_distribution_analytic(z, shift, t, m, StateVector::basis(1, 1));
    EXPECT_NEAR(p[5], 1.0, 1e-12);

    // uniform mix of two eigenstates with exact phases
    auto plus = StateVector::basis(1, 0);
    plus.apply(Gate::single(K::H, 0));
    const double t2 = 2 * kPi * (2.0 / 16.0); // theta(E=+1, shift 1) = 4/16, E=-1 -> 0
    const auto q = qpe_distribution_analytic(z, 1.0, t2, m, plus);
    EXPECT_NEAR(q[0], 0.5, 1e-12);
    EXPECT_NEAR(q[4], 0.5, 1e-12);

    std::mt19937_64 rng(46);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = oracle::random_hermitian(rng, 2, 5);
        const auto r = qpe_distribution_analytic(h, 1.7, 0.37 + trial * 0.11, 3 + trial % 5,
                                                 from_vec(oracle::random_state(rng, 2)));
        double total = 0;
        for (double v : r) {
            total += v;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

// ---- resource-analysis ----

TEST(LowerGate, Examples) {
    EXPECT_EQ(lower_gate(Gate::pauli_rotation(ps("ZZZZ"), 0.3), false),
              (ResourceCounts{6, 0, 1, 0}));
    EXPECT_EQ(lower_gate(Gate::pauli_rotation(ps("XX"), 0.3), false),
              (ResourceCounts{6, 0, 1, 0}));
    EXPECT_EQ(lower_gate(Gate::pauli_rotation(ps("YZ"), 0.3), false),
              (ResourceCounts{6, 0, 1, 0}));
    EXPECT_EQ(lower_gate(Gate::rz(0, 0.3), true), (ResourceCounts{2, 0, 2, 0}));
    for (K k : {K::H, K::S, K::Sdg, K::X, K::Y, K::Z}) {
        EXPECT_EQ(lower_gate(Gate::single(k, 0), false), (ResourceCounts{1, 0, 0, 0}));
    }
    EXPECT_EQ(lower_gate(Gate::cx(0, 1), false), (ResourceCounts{1, 0, 0, 0}));
    EXPECT_EQ(lower_gate(Gate::single(K::T, 0), false), (ResourceCounts{0, 1, 0, 0}));
    EXPECT_EQ(lower_gate(Gate::rz(0, 1.0), false), (ResourceCounts{0, 0, 1, 0}));
}

TEST(Count, RepeatUsesOneAnalysis) {
    AlgorithmGraph g(1);
    const auto d = g.add_definition("d", {Gate::rz(0, 0.1)});
    g.set_root(g.add_definition("root", {Call{d, 1024, {}}}));
    ResourceCounter counter(g);
    const auto s = counter.structural();
    EXPECT_EQ(s.rotations, BigInt(1024));
    EXPECT_EQ(counter.analyses_of(d, false), 1u);
    EXPECT_EQ(counter.analyses(), 2u);
}

TEST(Count, EmptyRootIsZeroWithWidth) {
    AlgorithmGraph g(5);
    g.set_root(g.add_definition("root", {}));
    const auto est = count(g, {}, 1e-3);
    EXPECT_EQ(est.total, (ResourceCounts{0, 0, 0, 5}));
}

TEST(Count, StructuralEqualsFlattenedOnRandomGraphs) {
    std::mt19937_64 rng(47);
    int checked = 0;
    while (checked < 60) {
        const auto g = oracle::random_graph(rng, 2 + checked % 4, 3 + checked % 5, 4);
        if (flattened_size(g) > 10000) {
            continue;
        }
        ResourceCounter counter(g);
        auto structural = counter.structural();
        structural.qubits = 0;
        EXPECT_EQ(structural, count_gates(flatten(g)));
        // one analysis per distinct (definition, controlled) pair reached
        std::set<std::pair<DefinitionId, bool>> reached;
        std::function<void(DefinitionId, bool)> walk = [&](DefinitionId id, bool c) {
            if (!reached.insert({id, c}).second) {
                return;
            }
            for (const auto &node : g.definition(id).body) {
                if (const auto *call = std::get_if<Call>(&node)) {
                    walk(call->callee, c || !call->controls.empty());
                }
            }
        };
        walk(g.root(), false);
        EXPECT_EQ(counter.analyses(), reached.size());
        ++checked;
    }
}

TEST(Count, HugeRepeatIsExact) {
    AlgorithmGraph g(2);
    const auto d = g.add_definition("d", {Gate::pauli_rotation(ps("XZ"), 0.2), Gate::cx(0, 1)});
    const auto mid = g.add_definition("mid", {Call{d, std::uint64_t{1} << 40, {}}});
    g.set_root(g.add_definition("root", {Call{mid, std::uint64_t{1} << 40, {}}}));
    ResourceCounter counter(g);
    const auto s = counter.structural();
    const BigInt reps = BigInt(1) << 80;
    EXPECT_EQ(s.rotations, reps);
    EXPECT_EQ(s.clifford, reps * 5);
    EXPECT_EQ(counter.analyses(), 3u);
}

TEST(Synthesis, FormulaAndMonotonicity) {
    ResourceCounts c{0, 3, 8, 1};
    const auto est = synthesize(c, {}, 1e-2);
    const double eps_s = 1e-2 / 8;
    const auto per = static_cast<std::uint64_t>(std::ceil(10 + 4 * std::log2(1 / eps_s)));
    EXPECT_EQ(est.t_per_rotation, per);
    EXPECT_NEAR(est.rotation_tolerance, eps_s, 1e-15);
    EXPECT_EQ(est.total.t_gates, BigInt(3 + 8 * per));
    EXPECT_EQ(est.structural.rotations, BigInt(8));

    BigInt prev = 0;
    for (double eps = 1.0; eps > 1e-12; eps /= 3) {
        const auto e = synthesize(c, {}, eps);
        EXPECT_GE(e.total.t_gates, prev);
        prev = e.total.t_gates;
    }
    EXPECT_EQ(synthesize(ResourceCounts{4, 1, 0, 2}, {}, 0.5).total.t_gates, BigInt(1));
    EXPECT_THROW((void)synthesize(c, {}, 0.0), InputError);
}
