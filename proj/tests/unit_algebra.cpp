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
// Pauli algebra, fermion mappings, spin models and file formats.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "hamkit/fermion.hpp"
#include "hamkit/io.hpp"
#include "hamkit/pauli.hpp"
#include "hamkit/spin_models.hpp"
#include "support/oracles.hpp"

using namespace hamkit;
using oracle::cplx;

namespace {

PauliString ps(const char *s) { return PauliString::parse(s); }

PauliSum sum_of(std::size_t n, std::initializer_list<std::pair<cplx, const char *>> terms) {
    PauliSum h(n);
    for (const auto &[c, s] : terms) {
        h.add(c, ps(s));
    }
    return h;
}

double max_abs(const oracle::Mat &m) { return m.cwiseAbs().maxCoeff(); }

std::filesystem::path temp_path(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / "hamkit_unit_algebra";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path &p, const std::string &s) {
    std::ofstream(p) << s;
}

const cplx I1(0, 1);

} // namespace

// ---- pauli-core ----

TEST(PauliString, ParseAndWeight) {
    const auto s = ps("XIZY");
    EXPECT_EQ(s.size(), 4u);
    EXPECT_EQ(s.weight(), 3u);
    EXPECT_EQ(s.to_string(), "XIZY");
    EXPECT_TRUE(ps("III").is_identity());
    EXPECT_THROW((void)ps("XQ"), InputError);
}

TEST(PauliMultiply, Examples) {
    auto [p1, s1] = multiply(ps("X"), ps("Y"));
    EXPECT_EQ(p1, I1);
    EXPECT_EQ(s1, ps("Z"));
    auto [p2, s2] = multiply(ps("XX"), ps("XX"));
    EXPECT_EQ(p2, cplx(1));
    EXPECT_EQ(s2, ps("II"));
    auto [p3, s3] = multiply(ps("XZ"), ps("ZX"));
    EXPECT_EQ(p3, cplx(1));
    EXPECT_EQ(s3, ps("YY"));
    EXPECT_THROW((void)multiply(ps("X"), ps("XX")), InputError);
}

TEST(PauliMultiply, AgreesWithDenseProductAndIsAssociative) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const auto a = oracle::random_string(rng, n);
        const auto b = oracle::random_string(rng, n);
        const auto c = oracle::random_string(rng, n);
        const auto [pab, ab] = multiply(a, b);
        EXPECT_NEAR(std::abs(pab), 1.0, 1e-15);
        const oracle::Mat lhs = pab * oracle::dense(ab.to_string());
        const oracle::Mat rhs = oracle::dense(a.to_string()) * oracle::dense(b.to_string());
        EXPECT_LT(max_abs(lhs - rhs), 1e-12);

        const auto [pab_c, ab_c] = multiply(ab, c);
        const auto [pbc, bc] = multiply(b, c);
        const auto [pa_bc, a_bc] = multiply(a, bc);
        EXPECT_EQ(ab_c, a_bc);
        EXPECT_LT(std::abs(pab * pab_c - pbc * pa_bc), 1e-15);
    }
}

TEST(PauliCommutes, Examples) {
    EXPECT_FALSE(commutes(ps("X"), ps("Z")));
    EXPECT_TRUE(commutes(ps("XZ"), ps("ZX")));
    EXPECT_TRUE(commutes(ps("XI"), ps("IZ")));
}

TEST(PauliCommutator, Examples) {
    const auto c1 = commutator(PauliTerm{0.5, ps("X")}, PauliTerm{0.3, ps("Z")});
    ASSERT_EQ(c1.size(), 1u);
    EXPECT_EQ(c1[0].string, ps("Y"));
    EXPECT_LT(std::abs(c1[0].coeff - cplx(0, -0.3)), 1e-15);
    EXPECT_NEAR(coeff_one_norm(c1), 0.3, 1e-15);

    EXPECT_TRUE(commutator(PauliTerm{1.0, ps("X")}, PauliTerm{1.0, ps("X")}).empty());

    const auto c3 = commutator(PauliTerm{1.0, ps("XX")}, PauliTerm{1.0, ps("ZI")});
    ASSERT_EQ(c3.size(), 1u);
    EXPECT_EQ(c3[0].string, ps("YX"));
    EXPECT_LT(std::abs(c3[0].coeff - cplx(0, -2)), 1e-15);
    const oracle::Mat a = oracle::dense("XX");
    const oracle::Mat b = oracle::dense("ZI");
    EXPECT_LT(max_abs(oracle::dense(c3) - (a * b - b * a)), 1e-12);
}

TEST(PauliCommutator, AntisymmetricAndMatchesDense) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const auto a = oracle::random_hermitian(rng, n, 4);
        const auto b = oracle::random_hermitian(rng, n, 3);
        const auto ab = commutator(a, b);
        const auto ba = commutator(b, a);
        EXPECT_LT(max_abs(oracle::dense(ab) + oracle::dense(ba)), 1e-12);
        const oracle::Mat A = oracle::dense(a);
        const oracle::Mat B = oracle::dense(b);
        EXPECT_LT(max_abs(oracle::dense(ab) - (A * B - B * A)), 1e-12);
    }
}

TEST(PauliSum, OneNormExamples) {
    EXPECT_DOUBLE_EQ(coeff_one_norm(sum_of(1, {{0.5, "X"}, {0.5, "Z"}})), 1.0);
    EXPECT_DOUBLE_EQ(coeff_one_norm(PauliSum(3)), 0.0);
    const auto xxz = generate({SpinModel::xxz_chain, 2, 1.0, 2.0, Boundary::open});
    EXPECT_DOUBLE_EQ(coeff_one_norm(xxz), 4.0);
}

TEST(PauliSum, OneNormBoundsSpectralNorm) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const auto h = oracle::random_hermitian(rng, n, 1 + trial % 9);
        EXPECT_LE(oracle::spectral_norm(oracle::dense(h)), coeff_one_norm(h) + 1e-12);
    }
}

TEST(PauliSum, SimplifyMergesDropsAndIsIdempotent) {
    auto h = sum_of(2, {{1.0, "XX"}, {0.5, "ZI"}, {-1.0, "XX"}, {0.25, "ZI"}, {1e-13, "YY"}});
    const auto s = h.simplify();
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].string, ps("ZI"));
    EXPECT_DOUBLE_EQ(s[0].coeff.real(), 0.75);

    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 4;
        PauliSum raw(n);
        std::normal_distribution<double> N;
        for (int k = 0; k < 12; ++k) {
            raw.add(cplx(N(rng), N(rng)), oracle::random_string(rng, n));
        }
        const auto once = raw.simplify();
        const auto twice = once.simplify();
        ASSERT_EQ(once.size(), twice.size());
        for (std::size_t k = 0; k < once.size(); ++k) {
            EXPECT_EQ(once[k].string, twice[k].string);
            EXPECT_EQ(once[k].coeff, twice[k].coeff);
        }
        EXPECT_LT(max_abs(oracle::dense(raw) - oracle::dense(once)), 1e-12);
    }
}

TEST(PauliSum, RejectsMismatchedAndNonFinite) {
    PauliSum h(2);
    EXPECT_THROW(h.add(1.0, ps("X")), InputError);
    EXPECT_THROW(h.add(std::nan(""), ps("XX")), InputError);
}

TEST(ToMatrix, ExamplesAndEndianness) {
    const auto z = to_matrix(sum_of(1, {{1.0, "Z"}}));
    EXPECT_EQ(z(0, 0), cplx(1));
    EXPECT_EQ(z(1, 1), cplx(-1));
    const auto xz = to_matrix(sum_of(1, {{1.0, "X"}, {1.0, "Z"}}));
    oracle::Mat want(2, 2);
    want << 1, 1, 1, -1;
    EXPECT_LT(max_abs(xz - want), 1e-15);

    // number operator of mode 0 on two modes: occupied when qubit 0 (MSB) is 1
    auto t = FermionTensors::zeros(2);
    t.h1(0, 0) = 1.0;
    const auto n0 = to_matrix(jordan_wigner(t));
    const oracle::Vec diag = n0.diagonal();
    EXPECT_LT(std::abs(diag(0) - 0.0), 1e-15);
    EXPECT_LT(std::abs(diag(1) - 0.0), 1e-15);
    EXPECT_LT(std::abs(diag(2) - 1.0), 1e-15);
    EXPECT_LT(std::abs(diag(3) - 1.0), 1e-15);
    EXPECT_THROW((void)to_matrix(PauliSum(13)), CapExceeded);
}

TEST(ToMatrix, MatchesKroneckerOracle) {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + trial % 5;
        PauliSum h(n);
        std::normal_distribution<double> N;
        for (int k = 0; k < 6; ++k) {
            h.add(cplx(N(rng), N(rng)), oracle::random_string(rng, n));
        }
        EXPECT_LT(max_abs(to_matrix(h) - oracle::dense(h)), 1e-12);
    }
}

// ---- fermion-map ----

TEST(JordanWigner, Examples) {
    auto t = FermionTensors::zeros(2);
    t.h1(0, 0) = 1.0;
    const auto h = jordan_wigner(t);
    EXPECT_EQ(pauli_count(h), 2u);
    EXPECT_LT(max_abs(oracle::dense(h) - oracle::dense(sum_of(2, {{0.5, "II"}, {-0.5, "ZI"}}))),
              1e-15);

    auto hop = FermionTensors::zeros(2);
    hop.h1(0, 1) = 1.0;
    hop.h1(1, 0) = 1.0;
    const auto hh = jordan_wigner(hop);
    EXPECT_EQ(hh.size(), 2u);
    EXPECT_LT(max_abs(oracle::dense(hh) - oracle::dense(sum_of(2, {{0.5, "XX"}, {0.5, "YY"}}))),
              1e-15);
    EXPECT_EQ(pauli_count(PauliSum(2)), 0u);
}

TEST(JordanWigner, EqualsFockSpaceMatrix) {
    std::mt19937_64 rng(21);
    for (std::size_t n : {1u, 2u, 3u, 4u}) {
        const auto t = oracle::random_tensors(rng, n);
        const auto h = jordan_wigner(t);
        EXPECT_TRUE(h.is_hermitian());
        EXPECT_LT(max_abs(oracle::dense(h) - oracle::fock_hamiltonian(t)), 1e-10) << n;
    }
}

TEST(JordanWigner, CanonicalAnticommutation) {
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = 0; q < n; ++q) {
                const auto lp = jordan_wigner_ladder(p, n);
                const auto lq = jordan_wigner_ladder(q, n);
                const oracle::Mat a = oracle::dense(lp.annihilation);
                const oracle::Mat ad = oracle::dense(lq.creation);
                const oracle::Mat ac = a * ad + ad * a;
                const auto dim = a.rows();
                const oracle::Mat want =
                    (p == q ? 1.0 : 0.0) * oracle::Mat::Identity(dim, dim);
                EXPECT_LT(max_abs(ac - want), 1e-12);
                const oracle::Mat b = oracle::dense(lq.annihilation);
                EXPECT_LT(max_abs(a * b + b * a), 1e-12);
            }
        }
    }
}

TEST(JordanWigner, ConservesParticleNumberForRealNumberConservingTensors) {
    std::mt19937_64 rng(22);
    const std::size_t n = 4;
    const auto t = oracle::random_tensors(rng, n, false);
    const oracle::Mat h = oracle::dense(jordan_wigner(t));
    auto num = FermionTensors::zeros(n);
    for (std::size_t p = 0; p < n; ++p) {
        num.h1(p, p) = 1.0;
    }
    const oracle::Mat N = oracle::dense(jordan_wigner(num));
    EXPECT_LT(max_abs(h * N - N * h), 1e-10);
}

TEST(BravyiKitaev, SmallExamples) {
    auto t1 = FermionTensors::zeros(1);
    t1.h1(0, 0) = 1.0;
    EXPECT_LT(max_abs(oracle::dense(bravyi_kitaev(t1)) -
                      oracle::dense(sum_of(1, {{0.5, "I"}, {-0.5, "Z"}}))),
              1e-15);
    auto t2 = FermionTensors::zeros(2);
    t2.h1(0, 0) = 1.0;
    EXPECT_LT(max_abs(oracle::dense(bravyi_kitaev(t2)) - oracle::dense(jordan_wigner(t2))),
              1e-15);
}

TEST(BravyiKitaev, IsospectralWithJordanWigner) {
    std::mt19937_64 rng(23);
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto t = oracle::random_tensors(rng, n);
        const auto jw = oracle::sorted_eigenvalues(oracle::dense(jordan_wigner(t)));
        const auto bk = oracle::sorted_eigenvalues(oracle::dense(bravyi_kitaev(t)));
        ASSERT_EQ(jw.size(), bk.size());
        for (std::size_t k = 0; k < jw.size(); ++k) {
            EXPECT_NEAR(jw[k], bk[k], 1e-8) << "n=" << n;
        }
    }
}

TEST(BravyiKitaev, LaddersAnticommute) {
    for (std::size_t n = 1; n <= 5; ++n) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = 0; q < n; ++q) {
                const oracle::Mat a = oracle::dense(bravyi_kitaev_ladder(p, n).annihilation);
                const oracle::Mat ad = oracle::dense(bravyi_kitaev_ladder(q, n).creation);
                const auto dim = a.rows();
                const oracle::Mat want =
                    (p == q ? 1.0 : 0.0) * oracle::Mat::Identity(dim, dim);
                EXPECT_LT(max_abs(a * ad + ad * a - want), 1e-12) << n << p << q;
            }
        }
    }
}

TEST(FermionTensors, ValidationErrors) {
    auto t = FermionTensors::zeros(2);
    t.h1(0, 1) = 1.0;
    EXPECT_THROW((void)jordan_wigner(t), InputError);
    auto u = FermionTensors::zeros(2);
    u.h2(0, 1, 1, 0) = cplx(0, 1); // its own mate, must be real
    EXPECT_THROW((void)jordan_wigner(u), InputError);
    EXPECT_THROW((void)jordan_wigner(FermionTensors::zeros(0)), InputError);
}

// ---- spin-models ----

TEST(SpinModels, Examples) {
    const auto xxz = generate({SpinModel::xxz_chain, 2, 1.0, 1.0, Boundary::open});
    ASSERT_EQ(xxz.size(), 3u);
    EXPECT_EQ(xxz[0].string, ps("XX"));
    EXPECT_EQ(xxz[1].string, ps("YY"));
    EXPECT_EQ(xxz[2].string, ps("ZZ"));
    for (const auto &t : xxz.terms()) {
        EXPECT_EQ(t.coeff, cplx(1));
    }
    const auto tfim = generate({SpinModel::tfim_chain, 2, 1.0, 0.0, Boundary::open});
    ASSERT_EQ(tfim.size(), 1u);
    EXPECT_EQ(tfim[0].string, ps("ZZ"));
    EXPECT_EQ(tfim[0].coeff, cplx(-1));
    EXPECT_THROW((void)generate({SpinModel::xxz_chain, 1, 1.0, 1.0, Boundary::open}),
                 InputError);
}

TEST(SpinModels, PeriodicXxzGroundEnergyMatchesDenseFormula) {
    const auto h = generate({SpinModel::xxz_chain, 3, 1.0, 0.5, Boundary::periodic});
    EXPECT_EQ(h.size(), 9u);
    // dense construction straight from the formula
    const std::size_t n = 3;
    oracle::Mat d = oracle::Mat::Zero(8, 8);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        d += oracle::embed1(oracle::pauli_2x2('X'), i, n) * oracle::embed1(oracle::pauli_2x2('X'), j, n);
        d += oracle::embed1(oracle::pauli_2x2('Y'), i, n) * oracle::embed1(oracle::pauli_2x2('Y'), j, n);
        d += 0.5 * oracle::embed1(oracle::pauli_2x2('Z'), i, n) *
             oracle::embed1(oracle::pauli_2x2('Z'), j, n);
    }
    EXPECT_NEAR(oracle::sorted_eigenvalues(oracle::dense(h))[0],
                oracle::sorted_eigenvalues(d)[0], 1e-12);
}

TEST(SpinModels, TermCounts) {
    for (std::size_t L = 2; L <= 7; ++L) {
        EXPECT_EQ(generate({SpinModel::xxz_chain, L, 1.0, 0.7, Boundary::open}).size(),
                  3 * (L - 1));
        EXPECT_EQ(generate({SpinModel::xxz_chain, L, 1.0, 0.7, Boundary::periodic}).size(),
                  3 * L);
        EXPECT_EQ(generate({SpinModel::tfim_chain, L, 1.0, 0.3, Boundary::open}).size(),
                  (L - 1) + L);
    }
}

// ---- ham-io ----

TEST(PauliText, ParsesExamples) {
    const auto hop = parse_pauli_text("0.5 XX\n0.5 YY");
    ASSERT_EQ(hop.size(), 2u);
    EXPECT_EQ(hop[0].string, ps("XX"));
    EXPECT_EQ(hop[1].coeff, cplx(0.5));
    const auto z = parse_pauli_text("# comment\n1.0 Z");
    ASSERT_EQ(z.num_qubits(), 1u);
    EXPECT_EQ(z[0].coeff, cplx(1.0));
    EXPECT_EQ(parse_pauli_text("-2.5e-3 IZ\n")[0].coeff, cplx(-2.5e-3));
}

TEST(PauliText, ErrorsCarryLineNumbers) {
    auto message = [](const char *text) -> std::string {
        try {
            (void)parse_pauli_text(text, "h.txt");
        } catch (const InputError &e) {
            return e.what();
        }
        return "no error";
    };
    EXPECT_NE(message("1.0 XX\nabc YY\n").find("h.txt:2"), std::string::npos);
    EXPECT_NE(message("1.0 XX\n\n0.5 XXX\n").find("h.txt:3"), std::string::npos);
    EXPECT_NE(message("1.0 XA\n").find("h.txt:1"), std::string::npos);
    EXPECT_NE(message("1.0\n").find("h.txt:1"), std::string::npos);
    EXPECT_NE(message("1.0 XX YY\n").find("h.txt:1"), std::string::npos);
    EXPECT_NE(message("").find("no terms"), std::string::npos);
    EXPECT_NE(message("# only a comment\n").find("no terms"), std::string::npos);
    EXPECT_THROW((void)read_pauli_text(temp_path("missing.pauli").string()), InputError);
}

TEST(PauliText, WriterOrderHeaderAndErrors) {
    const auto text = format_pauli_text(sum_of(2, {{0.1, "ZZ"}, {-0.9, "XI"}, {0.1, "XX"}}));
    EXPECT_EQ(text, "# hamkit pauli-text v1: 2 qubits, 3 terms\n"
                    "-0.90000000000000002 XI\n"
                    "0.10000000000000001 XX\n"
                    "0.10000000000000001 ZZ\n");
    EXPECT_EQ(format_pauli_text(PauliSum(3)), "# hamkit pauli-text v1: 3 qubits, 0 terms\n");
    EXPECT_THROW((void)format_pauli_text(sum_of(1, {{cplx(0, -2), "X"}})), InputError);
}

TEST(PauliText, RoundTripIsExact) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 6;
        PauliSum h(n);
        for (int k = 0; k < 10; ++k) {
            h.add(U(rng) * std::pow(10.0, trial % 7 - 3), oracle::random_string(rng, n));
        }
        const auto s = h.simplify();
        const auto path = temp_path("rt.pauli");
        write_pauli_text(s, path.string());
        const auto back = read_pauli_text(path.string());
        ASSERT_EQ(back.size(), s.size());
        for (const auto &t : s.terms()) {
            const auto it = std::find_if(back.terms().begin(), back.terms().end(),
                                         [&](const auto &b) { return b.string == t.string; });
            ASSERT_NE(it, back.terms().end());
            EXPECT_EQ(it->coeff, t.coeff); // bit-exact
        }
    }
}

TEST(TensorFile, RoundTripAndJordanWigner) {
    std::mt19937_64 rng(32);
    const auto t = oracle::random_tensors(rng, 3);
    const auto path = temp_path("t.json");
    write_tensor_file(t, path.string());
    const auto back = read_tensor_file(path.string());
    EXPECT_EQ(back.n_modes, t.n_modes);
    EXPECT_EQ(back.constant, t.constant);
    EXPECT_EQ(back.one_body, t.one_body);
    EXPECT_EQ(back.two_body, t.two_body);

    auto h00 = FermionTensors::zeros(2);
    h00.h1(0, 0) = 1.0;
    write_tensor_file(h00, path.string());
    const auto jw = jordan_wigner(read_tensor_file(path.string()));
    EXPECT_LT(max_abs(oracle::dense(jw) - oracle::dense(sum_of(2, {{0.5, "II"}, {-0.5, "ZI"}}))),
              1e-15);
}

TEST(TensorFile, RejectsBadDocuments) {
    auto doc = tensors_to_json(FermionTensors::zeros(2));
    auto expect_reject = [](const json &d, const char *needle) {
        try {
            (void)tensors_from_json(d, "t.json");
            ADD_FAILURE() << "accepted: " << needle;
        } catch (const InputError &e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    auto tag = doc;
    tag["convention"] = "other";
    expect_reject(tag, "convention");
    auto shape = doc;
    shape["one_body"].erase(1);
    expect_reject(shape, "shape");
    auto herm = doc;
    herm["one_body"][0][1] = json::array({1.0, 0.0});
    expect_reject(herm, "Hermitian");
    auto extra = doc;
    extra["spin"] = 1;
    expect_reject(extra, "unknown key");
    auto missing = doc;
    missing.erase("two_body");
    expect_reject(missing, "missing");
    const auto bad = temp_path("bad.json");
    write_text(bad, "{not json");
    EXPECT_THROW((void)read_tensor_file(bad.string()), InputError);
}

TEST(AmplitudeFile, RoundTrip) {
    const auto psi = StateVector::from_amplitudes({cplx(0.6, 0), 0, 0, cplx(0, 0.8)});
    const auto path = temp_path("amps.json");
    write_amplitude_file(psi, path.string());
    const auto back = read_amplitude_file(path.string());
    ASSERT_EQ(back.num_qubits(), 2u);
    for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_LT(std::abs(back[j] - psi[j]), 1e-15);
    }
    write_text(path, R"({"format_version": 1, "amplitudes": [[1, 0], [0, 0], [0, 0]]})");
    EXPECT_THROW((void)read_amplitude_file(path.string()), InputError);
}
