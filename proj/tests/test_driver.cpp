// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <json.hpp>
#include <set>

#include "beepl/driver.hpp"
#include "beepl/frontend.hpp"

using namespace beepl;

TEST_CASE("generation is deterministic in the seed") {
    for (uint64_t s : {0ULL, 1ULL, 77ULL, 0xdeadbeefULL}) {
        CHECK(generate_program(s).source == generate_program(s).source);
    }
    CHECK(generate_program(1).source != generate_program(2).source);
}

TEST_CASE("generated bodies respect the depth limit") {
    GenConfig cfg;
    for (int depth : {1, 3, 8}) {
        cfg.max_depth = depth;
        for (uint64_t s = 0; s < 40; ++s) {
            const Generated g = generate_program(s, cfg);
            for (const auto& d : g.program.decls)
                if (const auto* f = std::get_if<FunDecl>(&d)) CHECK(expr_depth(*f->body) <= static_cast<uint64_t>(depth));
        }
    }
    cfg.max_depth = 1;
    const Generated g = generate_program(0, cfg);
    const FunDecl* m = g.typed.fun("main");
    REQUIRE(m);
    CHECK(m->body->kids.empty());
}

TEST_CASE("sub seeds do not collide") {
    std::set<uint64_t> seen;
    for (uint64_t i = 0; i < 10000; ++i) seen.insert(sub_seed(42, i));
    CHECK(seen.size() == 10000);
}

TEST_CASE("empty suite passes") {
    const SuiteResult r = run_property_suite(0, 1);
    CHECK(r.programs == 0);
    CHECK(r.failures.empty());
}

TEST_CASE("property suite over generated programs") {
    const SuiteResult r = run_property_suite(200, 9);
    INFO(suite_summary(r));
    CHECK(r.passed == 200);
    CHECK(r.total_steps > 0);
}

TEST_CASE("suite notices an unguarded interpreter") {
    PropertyConfig broken;
    broken.guard_unsafe = false;
    const SuiteResult r = run_property_suite(200, 9, {}, broken);
    REQUIRE_FALSE(r.failures.empty());
    bool undef = false;
    for (const auto& f : r.failures) undef = undef || f.report.property == "NoUndef";
    CHECK(undef);
}

TEST_CASE("shrinking keeps the failure and reduces size") {
    PropertyConfig broken;
    broken.guard_unsafe = false;
    const ExternalWorld w = generator_world();
    for (uint64_t s = 0; s < 400; ++s) {
        const Generated g = generate_program(s);
        const PropertyReport rep = audit_program(g.typed, "main", w, broken);
        if (rep.ok) continue;
        const Program small = shrink_program(g.program, [&](const TypedProgram& tp) {
            const PropertyReport again = audit_program(tp, "main", w, broken);
            return !again.ok && again.property == rep.property;
        });
        CHECK(program_size(small) <= program_size(g.typed.program));
        const PropertyReport after = audit_program(check_program(small), "main", w, broken);
        CHECK_FALSE(after.ok);
        CHECK(after.property == rep.property);
        return;
    }
    FAIL("no failing program found");
}

TEST_CASE("corpus checks") {
    for (const auto& c : run_cve_corpus()) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.ok);
    }
}

TEST_CASE("normalisation drops temporary prefixes") {
    CHECK(normalize_c("if (__bpl_t0.start + sizeof(struct ethhdr) > __bpl_t0.end)") ==
          "if (start + sizeof(struct ethhdr) > end)");
    CHECK(normalize_c("a  =\t b") == "a = b");
}

TEST_CASE("reports serialise to JSON") {
    SuiteResult r;
    r.programs = 2;
    r.passed = 1;
    PropertyFailure f;
    f.seed = 5;
    f.report.ok = false;
    f.report.property = "Progress";
    r.failures.push_back(f);
    const auto j = nlohmann::json::parse(suite_json(r));
    CHECK(j["programs"] == 2);
    CHECK(j["failures"][0]["property"] == "Progress");
    DiffResult d;
    d.skipped = true;
    d.skip_reason = "no C compiler available";
    CHECK(nlohmann::json::parse(diff_json(d))["skipped"] == true);
    CHECK(diff_summary(d).find("skipped") != std::string::npos);
}

TEST_CASE("printed values") {
    CHECK(printed_value(Value::boolean(true)) == "1");
    CHECK(printed_value(Value::integer(PrimTy::int32(), -4)) == "-4");
    CHECK(printed_value(Value::integer(PrimTy::long_(Sign::Unsigned), -1)) == "18446744073709551615");
}

TEST_CASE("differential run on a few programs") {
    if (!find_c_compiler()) SKIP("no C compiler");
    const DiffResult r = run_differential(12, 3, std::nullopt);
    INFO(diff_summary(r));
    CHECK_FALSE(r.skipped);
    CHECK(r.agreed == 12);
}

TEST_CASE("missing compiler is a skip") {
    const DiffResult r = run_differential(5, 1, std::string("/nonexistent/cc"));
    CHECK(r.skipped);
    CHECK(r.mismatches.empty());
}
