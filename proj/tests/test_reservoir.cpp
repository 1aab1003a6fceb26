#include "helpers.hpp"

#include "qrc/graph.hpp"
#include "qrc/hamiltonian.hpp"
#include "qrc/reservoir.hpp"

#include <doctest.h>

#include <sstream>

using namespace qrc;
using namespace qrc::testing;

namespace {

// Two-qubit partial transpose on the second factor, written out by index.
CMatrix pt_second(const CMatrix& s) {
    CMatrix out(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) = s(2 * i + l, 2 * k + j);
    return out;
}

ReservoirConfig config(int n_total, std::vector<int> aux, double dt = 1.0) {
    ReservoirConfig cfg;
    cfg.n_total = n_total;
    cfg.n_aux = static_cast<int>(aux.size());
    cfg.aux_sites = std::move(aux);
    cfg.dt = dt;
    return cfg;
}

CMatrix chaotic_unitary(int n, double dt, std::uint64_t seed, double delta_x = 1.0) {
    Rng rng(seed);
    const Graph g = sample_rrg(n, n % 2 == 0 ? 3 : 4, rng);
    HamiltonianSpec spec;
    spec.delta_x = delta_x;
    return evolution_operator(herm_eig(build_hamiltonian(g, spec, sample_disorder(spec, n, rng))), dt);
}

} // namespace

TEST_CASE("Werner encoding") {
    CHECK(max_abs(encode_werner(0.0).matrix() - CMatrix::Identity(4, 4) / 4.0) < 1e-16);
    CHECK(max_abs(encode_werner(1.0).matrix() - singlet_projector()) < 1e-16);

    const RVector pt1 = herm_eigenvalues(pt_second(encode_werner(1.0).matrix()));
    CHECK(std::log2(pt1.cwiseAbs().sum()) == doctest::Approx(1.0).epsilon(1e-12));

    const RVector third = herm_eigenvalues(pt_second(encode_werner(1.0 / 3.0).matrix()));
    CHECK(std::abs(third(0)) < 1e-14);
    CHECK(herm_eigenvalues(pt_second(encode_werner(0.5).matrix()))(0) < -1e-3);

    for (double eta : {0.0, 0.2, 0.5, 0.9, 1.0}) CHECK(encode_werner(eta).is_valid());
    CHECK_THROWS_AS(encode_werner(-0.1), DomainError);
    CHECK_THROWS_AS(encode_werner(1.1), DomainError);
}

TEST_CASE("bit encoding") {
    CHECK(encode_bits(0, 0).matrix()(0, 0) == Complex(1.0)); // |up up>
    CHECK(encode_bits(1, 0).matrix()(2, 2) == Complex(1.0)); // |down up>
    CHECK(encode_bits(1, 1).matrix()(3, 3) == Complex(1.0)); // |down down>
    CHECK(std::abs(encode_bits(1, 0).matrix().trace() - Complex(1.0)) == 0.0);
    CHECK_THROWS_AS(encode_bits(2, 0), DomainError);
}

TEST_CASE("injection replaces the auxiliary marginal") {
    Rng rng(4);
    const auto cfg = config(4, {0, 1});
    const DensityMatrix s = random_density(2, rng);
    const DensityMatrix r = random_density(2, rng);
    const DensityMatrix s_new = random_density(2, rng);
    const DensityMatrix product(kron(s.matrix(), r.matrix()));

    CHECK(max_abs(inject(product, s_new, cfg).matrix() - kron(s_new.matrix(), r.matrix())) < 1e-14);
    CHECK(max_abs(inject(product, s, cfg).matrix() - product.matrix()) < 1e-14);

    const DensityMatrix entangled = random_density(4, rng);
    const std::vector<int> res{2, 3};
    const CMatrix before = partial_trace(entangled, res).matrix();
    const DensityMatrix after = inject(entangled, s_new, cfg);
    CHECK(max_abs(partial_trace(after, res).matrix() - before) < 1e-14);
    const std::vector<int> aux{0, 1};
    CHECK(max_abs(partial_trace(after, aux).matrix() - s_new.matrix()) < 1e-14);

    CHECK_THROWS_AS(inject(entangled, random_density(1, rng), cfg), DimensionError);
}

TEST_CASE("injection honours non-leading auxiliary sites") {
    Rng rng(6);
    const auto cfg = config(3, {2, 0}); // input qubit 0 -> site 2, input qubit 1 -> site 0
    const DensityMatrix a = random_density(1, rng);
    const DensityMatrix b = random_density(1, rng);
    const DensityMatrix input(kron(a.matrix(), b.matrix()));
    const DensityMatrix total = random_density(3, rng);
    const std::vector<int> mid{1};
    const CMatrix reservoir = partial_trace(total, mid).matrix();
    const CMatrix expected = kron(kron(b.matrix(), reservoir), a.matrix());
    CHECK(max_abs(inject(total, input, cfg).matrix() - expected) < 1e-14);
}

TEST_CASE("one channel step at N=3 matches a direct 8x8 computation") {
    Rng rng(10);
    const auto cfg = config(3, {0});
    const CMatrix u = evolution_operator(herm_eig(random_hermitian(8, rng)), 0.8);
    const ReservoirChannel channel(u, cfg);

    const DensityMatrix total = random_density(3, rng);
    const DensityMatrix input = random_density(1, rng);

    // reservoir marginal: sum over the first qubit by explicit indices
    CMatrix reservoir = CMatrix::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) reservoir(i, j) += total.matrix()(4 * a + i, 4 * a + j);
    CMatrix joined(8, 8);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) joined(4 * a + i, 4 * b + j) = input.matrix()(a, b) * reservoir(i, j);
    const CMatrix oracle = u * joined * u.adjoint();

    CHECK(max_abs(channel.step(total, input).matrix() - oracle) < 1e-12);

    // identity evolution reduces the step to an injection
    const ReservoirChannel idle(CMatrix::Identity(8, 8), cfg);
    CHECK(max_abs(idle.step(total, input).matrix() - inject(total, input, cfg).matrix()) < 1e-15);
}

TEST_CASE("short evolution stays close to the injection") {
    Rng rng(12);
    const auto cfg = config(3, {0});
    const CMatrix h = random_hermitian(8, rng);
    const DensityMatrix total = random_density(3, rng);
    const DensityMatrix input = random_density(1, rng);
    const CMatrix injected = inject(total, input, cfg).matrix();
    double previous = 1.0;
    for (double dt : {1e-2, 1e-3, 1e-4}) {
        const ReservoirChannel ch(evolution_operator(herm_eig(h), dt), cfg);
        const double dev = max_abs(ch.step(total, input).matrix() - injected);
        CHECK(dev < 20.0 * dt);
        CHECK(dev < previous);
        previous = dev;
    }
}

TEST_CASE("reduced channel agrees with the full step") {
    Rng rng(20);
    for (const auto& aux : {std::vector<int>{0, 1}, std::vector<int>{3, 1}}) {
        const auto cfg = config(5, aux, 3.0);
        const ReservoirChannel channel(chaotic_unitary(5, 3.0, 99), cfg);
        const auto res = cfg.reservoir_sites();
        for (const DensityMatrix& input : {encode_werner(0.37), encode_bits(1, 0), random_density(2, rng)}) {
            const DensityMatrix total = random_density(5, rng);
            const CMatrix full = partial_trace(channel.step(total, input).matrix(), 5, res);
            const CMatrix reduced = channel.apply(partial_trace(total.matrix(), 5, res), input);
            CHECK(max_abs(full - reduced) < 1e-12);
        }
    }
}

TEST_CASE("channel rejects a non-unitary operator") {
    CHECK_THROWS_AS(ReservoirChannel(2.0 * CMatrix::Identity(8, 8), config(3, {0})), DomainError);
    CHECK_THROWS_AS(ReservoirChannel(CMatrix::Identity(4, 4), config(3, {0})), DimensionError);
}

TEST_CASE("features") {
    const auto cfg = config(4, {0, 1});
    const DensityMatrix all_up = DensityMatrix::basis_state(4, 0);
    for (double v : extract_features(all_up, cfg).values) CHECK(v == doctest::Approx(1.0));
    for (double v : extract_features(DensityMatrix::maximally_mixed(4), cfg).values) CHECK(std::abs(v) < 1e-15);
    CHECK(extract_features(all_up, cfg).values.size() == 3);

    Rng rng(30);
    const DensityMatrix r = random_density(2, rng);
    const auto f = reservoir_features(r.matrix());
    REQUIRE(f.size() == 3);
    const CMatrix z = pauli(Pauli::Z);
    const CMatrix id = CMatrix::Identity(2, 2);
    CHECK(f[0] == doctest::Approx((r.matrix() * kron(z, id)).trace().real()).epsilon(1e-13));
    CHECK(f[1] == doctest::Approx((r.matrix() * kron(id, z)).trace().real()).epsilon(1e-13));
    CHECK(f[2] == doctest::Approx((r.matrix() * kron(z, z)).trace().real()).epsilon(1e-13));

    CHECK(config(8, {0, 1}).n_features() == 21);
}

TEST_CASE("driven sequences") {
    const auto cfg = config(4, {0, 1});
    const ReservoirChannel idle(CMatrix::Identity(16, 16), cfg);
    const std::vector<DensityMatrix> none;
    CHECK(run_sequence(none, idle, DensityMatrix::maximally_mixed(4)).empty());

    const std::vector<DensityMatrix> constant(5, encode_bits(1, 1));
    const auto rec = run_sequence(constant, idle, DensityMatrix::basis_state(4, 5));
    REQUIRE(rec.size() == 5);
    for (const auto& r : rec) {
        for (std::size_t c = 0; c < r.values.size(); ++c) CHECK(r.values[c] == doctest::Approx(rec[0].values[c]));
    }
    CHECK(rec[3].step_index == 3);
}

TEST_CASE("fading memory: initial-state differences contract") {
    const auto cfg = config(6, {0, 1}, 3.0);
    const ReservoirChannel channel(chaotic_unitary(6, 3.0, 5), cfg);
    Rng rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<DensityMatrix> inputs;
    for (int i = 0; i < 300; ++i) inputs.push_back(encode_werner(u(rng)));

    std::vector<CMatrix> path_a;
    std::vector<CMatrix> path_b;
    const auto fa = run_reservoir(inputs, channel, DensityMatrix::basis_state(4, 0).matrix(),
                                  [&](std::size_t, const CMatrix& m) { path_a.push_back(m); });
    const auto fb = run_reservoir(inputs, channel, DensityMatrix::basis_state(4, 15).matrix(),
                                  [&](std::size_t, const CMatrix& m) { path_b.push_back(m); });

    double previous = 1.0;
    for (std::size_t n = 0; n < path_a.size(); ++n) {
        const double d = 0.5 * trace_norm(path_a[n] - path_b[n]);
        CHECK(d <= previous + 1e-12);
        previous = d;
    }
    double last = 0.0;
    for (std::size_t c = 0; c < fa.back().values.size(); ++c) {
        last = std::max(last, std::abs(fa.back().values[c] - fb.back().values[c]));
    }
    CHECK(last < 1e-6);
}

TEST_CASE("channel output ignores the previous auxiliary state") {
    Rng rng(40);
    const auto cfg = config(4, {0, 1}, 2.0);
    const ReservoirChannel channel(chaotic_unitary(4, 2.0, 3), cfg);
    const DensityMatrix r = random_density(2, rng);
    const DensityMatrix input = encode_werner(0.8);
    const DensityMatrix a(kron(random_density(2, rng).matrix(), r.matrix()));
    const DensityMatrix b(kron(random_density(2, rng).matrix(), r.matrix()));
    CHECK(max_abs(channel.step(a, input).matrix() - channel.step(b, input).matrix()) < 1e-13);
}

TEST_CASE("invariants hold along a driven trajectory") {
    const auto cfg = config(5, {0, 1}, 3.0);
    const ReservoirChannel channel(chaotic_unitary(5, 3.0, 11), cfg);
    Rng rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DensityMatrix state = DensityMatrix::maximally_mixed(5);
    for (int n = 0; n < 200; ++n) {
        state = channel.step(state, encode_werner(u(rng)));
        CHECK_NOTHROW(state.check_invariants());
        for (double f : extract_features(state, cfg).values) CHECK(std::abs(f) <= 1.0 + 1e-12);
    }
}

TEST_CASE("feature CSV") {
    const std::vector<FeatureRecord> recs{{0, {1.0, -0.5}}, {1, {0.25, 0.0}}};
    std::ostringstream os;
    write_features_csv(os, recs);
    CHECK(os.str() == "step,f_0,f_1\n0,1,-0.5\n1,0.25,0\n");
    const RMatrix x = feature_matrix(recs);
    CHECK(x.rows() == 2);
    CHECK(x(1, 0) == 0.25);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(config(3, {0, 1, 2}).validate(), DomainError);
    CHECK_THROWS_AS(config(3, {0, 0}).validate(), DomainError);
    CHECK_THROWS_AS(config(3, {5}).validate(), DomainError);
    CHECK_THROWS_AS(config(3, {0}, 0.0).validate(), DomainError);
    CHECK(config(5, {3, 1}).reservoir_sites() == std::vector<int>{0, 2, 4});
}
