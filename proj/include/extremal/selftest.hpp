#pragma once

// Built-in self-test: static invariant suites over small groups plus
// randomized master-identity trials. Deterministic given (seed, trials).

#include "extremal/curves.hpp"
#include "extremal/extremal_polynomial.hpp"
#include "extremal/group_context.hpp"
#include "extremal/io.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace extremal {

struct SuiteResult {
    std::string name;
    int checks = 0;
    int failures = 0;
    std::vector<std::string> diagnostics;

    void tally(bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            ++failures;
            diagnostics.push_back(what);
        }
    }
};

struct SelfTestReport {
    std::uint64_t seed = 0;
    int trials = 0;
    std::vector<SuiteResult> suites;

    bool pass() const {
        for (const auto& s : suites)
            if (s.failures != 0) return false;
        return true;
    }
    int total_checks() const {
        int n = 0;
        for (const auto& s : suites) n += s.checks;
        return n;
    }
};

namespace selftest_detail {

inline Rational random_rational(std::mt19937_64& rng) {
    long num = static_cast<long>(rng() % 9) - 4;
    long den = static_cast<long>(rng() % 3) + 1;
    return Rational(num, den);
}

inline UniPoly random_unipoly(std::mt19937_64& rng, int max_degree) {
    std::size_t deg = rng() % static_cast<std::size_t>(max_degree + 1);
    std::vector<Rational> cs(deg + 1);
    for (auto& c : cs) c = random_rational(rng);
    return UniPoly(std::move(cs));
}

inline RatVec random_covector(std::mt19937_64& rng, int n) {
    RatVec v(static_cast<std::size_t>(n));
    for (auto& c : v) c = random_rational(rng);
    return v;
}

inline SuiteResult suite_witt() {
    SuiteResult s;
    s.name = "witt";
    for (int r : {2, 3})
        for (int step = 1; step <= 6; ++step) {
            std::vector<long long> dims = HallBasis::witt_dimensions(r, step);
            HallBasis b = HallBasis::build(r, step);
            bool ok = true;
            int total = 0;
            for (int d = 1; d <= step; ++d) {
                ok = ok && b.layer_dims()[static_cast<std::size_t>(d - 1)] ==
                               dims[static_cast<std::size_t>(d)];
                total += dims[static_cast<std::size_t>(d)];
            }
            ok = ok && b.dimension() == total;
            s.tally(ok, "layer dimensions disagree with the dimension formula at rank " +
                            std::to_string(r) + " step " + std::to_string(step));
        }
    HallBasis b26 = HallBasis::build(2, 6);
    s.tally(b26.dimension() == 23, "rank 2 step 6 must have dimension 23");
    HallBasis b34 = HallBasis::build(3, 4);
    s.tally(b34.dimension() == 32, "rank 3 step 4 must have dimension 32");
    return s;
}

inline SuiteResult suite_jacobi() {
    SuiteResult s;
    s.name = "jacobi";
    for (auto [r, st] : {std::pair{2, 4}, std::pair{3, 3}}) {
        GroupContext ctx = GroupContext::build(r, st);
        bool ok = true;
        for (int i = 1; i <= ctx.dimension() && ok; ++i)
            for (int j = i + 1; j <= ctx.dimension() && ok; ++j)
                for (int k = j + 1; k <= ctx.dimension() && ok; ++k)
                    ok = jacobi_defect(ctx, i, j, k).empty();
        s.tally(ok, "Jacobi identity fails in rank " + std::to_string(r) + " step " +
                        std::to_string(st));
    }
    return s;
}

inline SuiteResult suite_bracket_expansion() {
    SuiteResult s;
    s.name = "bracket-expansion";
    GroupContext ctx = GroupContext::build(2, 4);
    CommutatorFold fold(ctx);
    std::vector<int> weights = ctx.basis().degrees();
    bool ok = true;
    int cases = 0;
    for (const MultiIndex& beta : enumerate_weighted_multi_indices(weights, 3)) {
        if (beta.is_zero()) continue;
        for (int i = 1; i <= ctx.dimension() && ok; ++i)
            for (int q = 1; q <= ctx.rank() && ok; ++q) {
                ok = check_commutator_expansion(ctx, i, q, beta, fold);
                ++cases;
            }
        if (!ok) break;
    }
    s.tally(ok, "double-bracket expansion identity fails in rank 2 step 4");
    s.tally(cases > 100, "sweep unexpectedly small");
    return s;
}

inline SuiteResult suite_derivative_identity() {
    SuiteResult s;
    s.name = "derivative-identity";
    GroupContext ctx = GroupContext::build(2, 4);
    auto family = build_extremal_family(ctx);
    bool ok = true;
    for (int i = 1; i <= ctx.dimension() && ok; ++i)
        for (int j = 1; j <= ctx.dimension() && ok; ++j)
            for (int k = 1; k <= ctx.dimension() && ok; ++k) {
                RatVec v(static_cast<std::size_t>(ctx.dimension()), Rational(0));
                v[static_cast<std::size_t>(k - 1)] = 1;
                ok = check_derivative_identity(ctx, family, i, j, v);
            }
    s.tally(ok, "derivative identity X_i P_j = sum c_ij^k P_k fails in rank 2 step 4");
    return s;
}

inline SuiteResult suite_exponential_coordinates() {
    SuiteResult s;
    s.name = "exponential-coordinates";
    for (auto [r, st] : {std::pair{2, 4}, std::pair{3, 3}}) {
        GroupContext ctx = GroupContext::build(r, st);
        s.tally(check_exponential_coordinates(ctx),
                "chart composition check fails in rank " + std::to_string(r) + " step " +
                    std::to_string(st));
    }
    return s;
}

inline SuiteResult suite_master_identity(std::mt19937_64& rng, int trials) {
    SuiteResult s;
    s.name = "master-identity";
    if (trials <= 0) return s;
    GroupContext ctx = GroupContext::build(2, 4);
    auto family = build_extremal_family(ctx);
    for (int t = 0; t < trials; ++t) {
        std::vector<UniPoly> h;
        for (int j = 0; j < ctx.rank(); ++j) h.push_back(random_unipoly(rng, 3));
        ControlLaw law = ControlLaw::single(std::move(h));
        DevelopedCurve curve = develop(ctx, law);
        RatVec v0 = random_covector(rng, ctx.dimension());
        bool ok = verify_master_identity(ctx, family, curve, v0);
        s.tally(ok, "adjoint solution differs from the dual composition at trial " +
                        std::to_string(t));
        if (!ok) break;
    }
    return s;
}

inline SuiteResult suite_cache_guard(std::uint64_t seed) {
    SuiteResult s;
    s.name = "cache-guard";
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() /
                   ("extremal-lab-selftest-" + std::to_string(seed) + "-" +
                    std::to_string(static_cast<unsigned>(::getpid())));
    fs::remove_all(dir);
    fs::path file = cache_file_path(dir, 2, 3);

    (void)load_or_build_context(2, 3, dir);
    bool reload_ok = true;
    try {
        (void)load_or_build_context(2, 3, dir);
    } catch (const std::exception&) {
        reload_ok = false;
    }
    s.tally(reload_ok, "clean cache reload must validate");

    {
        Json j = load_json_file(file);
        j["structure"][0]["num"] = "7";
        save_json_file(j, file);
        bool threw = false;
        try {
            (void)load_or_build_context(2, 3, dir);
        } catch (const std::runtime_error&) {
            threw = true;
        }
        s.tally(threw, "tampered bracket coefficient must be rejected on load");
    }
    fs::remove_all(dir);
    {
        (void)load_or_build_context(2, 3, dir);
        Json j = load_json_file(file);
        bool tampered = false;
        for (auto& e : j["generalized"]) {
            int weight = 0;
            for (const auto& q : e["alpha"]) weight += q.get<int>();
            if (weight >= 1 && e["num"].get<std::string>() == "1" &&
                e["den"].get<std::string>() == "1") {
                e["num"] = "5";
                tampered = true;
                break;
            }
        }
        save_json_file(j, file);
        bool threw = false;
        try {
            (void)load_or_build_context(2, 3, dir);
        } catch (const std::runtime_error&) {
            threw = true;
        }
        s.tally(tampered && threw, "tampered iterated-bracket coefficient must be rejected on load");
    }
    fs::remove_all(dir);
    {
        fs::create_directories(dir);
        std::ofstream(file) << "this is not json";
        bool threw = false;
        try {
            (void)load_or_build_context(2, 3, dir);
        } catch (const std::runtime_error&) {
            threw = true;
        }
        s.tally(threw, "unparseable cache file must be rejected with a diagnostic");
    }
    fs::remove_all(dir);
    return s;
}

}  // namespace selftest_detail

inline SelfTestReport run_selftest(std::uint64_t seed, int trials) {
    using namespace selftest_detail;
    SelfTestReport rep;
    rep.seed = seed;
    rep.trials = trials;
    std::mt19937_64 rng(seed);
    rep.suites.push_back(suite_witt());
    rep.suites.push_back(suite_jacobi());
    rep.suites.push_back(suite_bracket_expansion());
    rep.suites.push_back(suite_derivative_identity());
    rep.suites.push_back(suite_exponential_coordinates());
    rep.suites.push_back(suite_master_identity(rng, trials));
    rep.suites.push_back(suite_cache_guard(seed));
    return rep;
}

inline Json selftest_report_to_json(const SelfTestReport& rep) {
    Json out;
    out["seed"] = rep.seed;
    out["trials"] = rep.trials;
    out["pass"] = rep.pass();
    Json suites = Json::array();
    for (const auto& s : rep.suites) {
        Json js;
        js["name"] = s.name;
        js["checks"] = s.checks;
        js["failures"] = s.failures;
        js["diagnostics"] = s.diagnostics;
        suites.push_back(std::move(js));
    }
    out["suites"] = std::move(suites);
    return out;
}

}  // namespace extremal
