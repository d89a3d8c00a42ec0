#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "triadyn/error.hpp"
#include "triadyn/triads.hpp"

using namespace triadyn;

namespace {
const TriadTypeTable& table() {
    static const TriadTypeTable t = build_type_table();
    return t;
}
}  // namespace

TEST_CASE("encode/decode round-trip and fixed points") {
    CHECK(encode_triad({0, 0, 0, 0, 0, 0}).value == 364);
    CHECK(encode_triad({1, 1, 1, 1, 1, 1}).value == 728);
    CHECK(encode_triad({-1, -1, -1, -1, -1, -1}).value == 0);
    for (int c = 0; c < kTriadCodeCount; ++c) {
        CHECK(encode_triad(decode_triad(TriadCode{c})).value == c);
    }
    CHECK(canonicalize(TriadCode{364}).value == 364);
    CHECK(canonicalize(TriadCode{728}).value == 728);
}

TEST_CASE("canonicalize matches the explicit permutation oracle on all 729 codes") {
    for (int c = 0; c < kTriadCodeCount; ++c) {
        CHECK(canonicalize(TriadCode{c}).value == oracle::canonical_code(c));
    }
}

TEST_CASE("type table has 138 classes with the expected balance totals") {
    const TriadTypeTable& t = table();
    std::set<int> canon;
    for (int type = 0; type < kTriadTypeCount; ++type) {
        canon.insert(t.canonical_codes[type].value);
    }
    CHECK(canon.size() == 138);

    // Ascending id order and orbit partition.
    int orbit_total = 0;
    for (int type = 0; type < kTriadTypeCount; ++type) {
        if (type > 0) CHECK(t.canonical_codes[type].value > t.canonical_codes[type - 1].value);
        const int size = t.orbit_sizes[type];
        CHECK((size == 1 || size == 2 || size == 3 || size == 6));
        orbit_total += size;
    }
    CHECK(orbit_total == 729);

    // Burnside: (729 + 3*27 + 2*9) / 6.
    CHECK((729 + 3 * 27 + 2 * 9) / 6 == 138);

    // Complete (all-non-null) classes.
    int complete = 0;
    for (int type = 0; type < kTriadTypeCount; ++type) {
        const TriadSigns signs = decode_triad(t.canonical_codes[type]);
        bool all_nonnull = true;
        for (int s : signs) all_nonnull &= (s != 0);
        complete += all_nonnull;
    }
    CHECK(complete == 16);

    CHECK(t.balanced_count(BalanceModel::Classical) == 24);
    CHECK(t.balanced_count(BalanceModel::Clustering) == 44);
    CHECK(t.balanced_count(BalanceModel::Transitivity) == 93);
}

TEST_CASE("balance nesting: classical within clustering within transitivity") {
    const TriadTypeTable& t = table();
    for (int type = 0; type < kTriadTypeCount; ++type) {
        if (t.is_balanced(type, BalanceModel::Classical)) {
            CHECK(t.is_balanced(type, BalanceModel::Clustering));
        }
        if (t.is_balanced(type, BalanceModel::Clustering)) {
            CHECK(t.is_balanced(type, BalanceModel::Transitivity));
        }
    }
}

TEST_CASE("classify_balance on the named configurations") {
    const TriadCode all_positive = encode_triad({1, 1, 1, 1, 1, 1});
    CHECK(classify_balance(all_positive, BalanceModel::Classical));
    CHECK(classify_balance(all_positive, BalanceModel::Clustering));
    CHECK(classify_balance(all_positive, BalanceModel::Transitivity));

    // i ->+ k ->+ j with a closing negative edge: slots (e_ij,e_ji,e_ik,e_ki,e_jk,e_kj),
    // take i=0, k=2, j=1: e_ik = slot 2, e_kj = slot 5, e_ij = slot 0.
    const TriadCode intransitive = encode_triad({-1, 0, 1, 0, 0, 1});
    CHECK_FALSE(classify_balance(intransitive, BalanceModel::Classical));
    CHECK_FALSE(classify_balance(intransitive, BalanceModel::Clustering));
    CHECK_FALSE(classify_balance(intransitive, BalanceModel::Transitivity));

    const TriadCode all_negative = encode_triad({-1, -1, -1, -1, -1, -1});
    CHECK_FALSE(classify_balance(all_negative, BalanceModel::Classical));
    CHECK(classify_balance(all_negative, BalanceModel::Clustering));
    CHECK(classify_balance(all_negative, BalanceModel::Transitivity));
}

TEST_CASE("census counts all-zero and complete fixtures") {
    const TriadTypeTable& t = table();

    SignedNetwork zeros;
    zeros.n = 5;
    zeros.adjacency.assign(25, 0);
    zeros.node_ids = {0, 1, 2, 3, 4};
    const CensusVector cz = census(zeros, t);
    CHECK(cz.total() == 10);  // C(5,3)
    CHECK(cz.counts[t.type_of[364]] == 10);

    SignedNetwork pos;
    pos.n = 3;
    pos.adjacency.assign(9, 1);
    pos.node_ids = {0, 1, 2};
    pos.at(0, 0) = pos.at(1, 1) = pos.at(2, 2) = 0;
    const CensusVector cp = census(pos, t);
    CHECK(cp.total() == 1);
    CHECK(cp.counts[t.type_of[728]] == 1);

    SignedNetwork tiny;
    tiny.n = 2;
    tiny.adjacency.assign(4, 0);
    tiny.node_ids = {0, 1};
    CHECK_THROWS_AS(census(tiny, t), InputError);
}

TEST_CASE("census equals the brute-force triple classifier on random networks") {
    const TriadTypeTable& t = table();
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const SignedNetwork net = oracle::random_network(rng, oracle::uniform_int(rng, 4, 8));
        const auto expected = oracle::brute_census(net, t);
        const CensusVector got = census(net, t);
        for (int type = 0; type < kTriadTypeCount; ++type) {
            REQUIRE(got.counts[type] == expected[type]);
        }
    }
}

TEST_CASE("parallel census and transition counts are bit-identical to the serial reference") {
    const TriadTypeTable& t = table();
    std::mt19937_64 rng(11);
    const SignedNetwork a = oracle::random_network(rng, 17, 0);
    const SignedNetwork b = oracle::random_network(rng, 17, 1);
    const CensusVector c_par = census(a, t);
    const CensusVector c_ser = serial::census(a, t);
    CHECK(c_par.counts == c_ser.counts);
    const TransitionCounts tc_par = transition_counts(a, b, t);
    const TransitionCounts tc_ser = serial::transition_counts(a, b, t);
    CHECK(tc_par.counts == tc_ser.counts);
}

TEST_CASE("transition counts: identical networks give a diagonal census") {
    const TriadTypeTable& t = table();
    std::mt19937_64 rng(3);
    const SignedNetwork net = oracle::random_network(rng, 6);
    const TransitionCounts tc = transition_counts(net, net, t);
    const CensusVector c = census(net, t);
    for (int i = 0; i < kTriadTypeCount; ++i) {
        for (int j = 0; j < kTriadTypeCount; ++j) {
            CHECK(tc.at(i, j) == (i == j ? c.counts[i] : 0));
        }
    }
}

TEST_CASE("transition counts: one flipped edge moves exactly one triple off-diagonal") {
    const TriadTypeTable& t = table();
    SignedNetwork before;
    before.n = 3;
    before.adjacency.assign(9, 0);
    before.node_ids = {0, 1, 2};
    SignedNetwork after = before;
    after.at(0, 1) = 1;
    const TransitionCounts tc = transition_counts(before, after, t);
    std::int64_t diag = 0, off = 0;
    for (int i = 0; i < kTriadTypeCount; ++i) {
        for (int j = 0; j < kTriadTypeCount; ++j) {
            (i == j ? diag : off) += tc.at(i, j);
        }
    }
    CHECK(off == 1);
    CHECK(diag == 0);
    CHECK(tc.at(t.type_of[364], t.type_of[canonicalize(encode_triad({1, 0, 0, 0, 0, 0})).value]) == 1);
}

TEST_CASE("transition marginals equal the two censuses") {
    const TriadTypeTable& t = table();
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = oracle::uniform_int(rng, 4, 8);
        const SignedNetwork a = oracle::random_network(rng, n, 0);
        const SignedNetwork b = oracle::random_network(rng, n, 1);
        const TransitionCounts tc = transition_counts(a, b, t);
        const CensusVector ca = serial::census(a, t);
        const CensusVector cb = serial::census(b, t);
        for (int i = 0; i < kTriadTypeCount; ++i) {
            std::int64_t row = 0, col = 0;
            for (int j = 0; j < kTriadTypeCount; ++j) {
                row += tc.at(i, j);
                col += tc.at(j, i);
            }
            REQUIRE(row == ca.counts[i]);
            REQUIRE(col == cb.counts[i]);
        }
    }
}

TEST_CASE("transition counts require a shared registry slice") {
    const TriadTypeTable& t = table();
    std::mt19937_64 rng(5);
    const SignedNetwork a = oracle::random_network(rng, 5);
    SignedNetwork b = a;
    b.node_ids[0] = 99;
    CHECK_THROWS_AS(transition_counts(a, b, t), InputError);
}

TEST_CASE("proportion normalizes and rejects empty censuses") {
    CensusVector c;
    c.counts[3] = 10;
    const std::vector<double> p = proportion(c);
    CHECK(p[3] == doctest::Approx(1.0));

    CensusVector zero;
    CHECK_THROWS_AS(proportion(zero), AnalysisError);

    CensusVector scaled;
    // 392,084 triples spread over a few types still normalizes to 1.
    scaled.counts[0] = 292084;
    scaled.counts[1] = 50000;
    scaled.counts[2] = 50000;
    const std::vector<double> q = proportion(scaled);
    double sum = 0.0;
    for (double v : q) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    CensusVector uniform;
    for (int i = 0; i < kTriadTypeCount; ++i) uniform.counts[i] = 7;
    const std::vector<double> u = proportion(uniform);
    for (double v : u) CHECK(v == doctest::Approx(1.0 / 138).epsilon(1e-12));
}

TEST_CASE("balanced_share sums the flagged types") {
    const TriadTypeTable& t = table();
    std::vector<double> all_null(kTriadTypeCount, 0.0);
    all_null[t.type_of[364]] = 1.0;
    for (BalanceModel m : kAllBalanceModels) {
        CHECK(balanced_share(all_null, t, m) == doctest::Approx(1.0));
    }

    std::vector<double> intransitive(kTriadTypeCount, 0.0);
    intransitive[t.type_of[canonicalize(encode_triad({-1, 0, 1, 0, 0, 1})).value]] = 1.0;
    for (BalanceModel m : kAllBalanceModels) {
        CHECK(balanced_share(intransitive, t, m) == doctest::Approx(0.0));
    }

    std::mt19937_64 rng(23);
    std::vector<double> prop(kTriadTypeCount, 0.0);
    double sum = 0.0;
    for (double& v : prop) sum += (v = oracle::uniform01(rng));
    for (double& v : prop) v /= sum;
    for (BalanceModel m : kAllBalanceModels) {
        double unbalanced = 0.0;
        for (int type = 0; type < kTriadTypeCount; ++type) {
            if (!t.is_balanced(type, m)) unbalanced += prop[type];
        }
        CHECK(balanced_share(prop, t, m) + unbalanced == doctest::Approx(1.0).epsilon(1e-12));
    }
}
