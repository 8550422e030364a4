// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "beepl/driver.hpp"
#include "beepl/frontend.hpp"

namespace beepl {

namespace {

PropertyReport violated(PropertyReport r, std::string property, std::string detail) {
    r.ok = false;
    r.property = std::move(property);
    r.detail = std::move(detail);
    return r;
}

std::optional<std::pair<std::string, std::string>> monitor_violation(const Monitor& m) {
    const std::string last = m.events.empty() ? std::string() : m.events.back();
    if (m.null_derefs) return std::make_pair(std::string("NullMonitor"), last);
    if (m.uninit_reads) return std::make_pair(std::string("UninitMonitor"), last);
    if (m.undef_values) return std::make_pair(std::string("NoUndef"), last);
    if (m.out_of_bounds) return std::make_pair(std::string("BoundsMonitor"), last);
    return std::nullopt;
}

} // namespace

PropertyReport audit_program(const TypedProgram& tp, const std::string& entry, ExternalWorld w,
                             const PropertyConfig& cfg) {
    PropertyReport r;
    const FunDecl* fd = tp.fun(entry);
    if (!fd) return violated(r, "Entry", "no function '" + entry + "'");
    State s = initial_state(tp, w);
    s.guard_unsafe = cfg.guard_unsafe;
    ExprPtr e = entry_call(s, w, *fd);
    auto type_of = [&](const ExprPtr& x) { return infer_expr(typing_context_for(s, tp.ctx), x); };

    Ty t0;
    Effect eff0;
    try {
        std::tie(t0, eff0) = type_of(e);
    } catch (const CompileError& ce) {
        return violated(r, "Typing", ce.what());
    }
    if (eff0.contains(EffectAtom::Divergence)) return violated(r, "NoDivergence", "entry effect " + to_string(eff0));
    if (auto wf = well_formed_report(s); !wf.ok) return violated(r, "WellFormed", wf.violations.front());

    while (!is_value(*e)) {
        if (r.steps >= cfg.fuel) return violated(r, "Termination", "fuel exhausted after " + std::to_string(r.steps));
        StepOutcome o = step(s, w, e);
        r.monitor = s.monitor;
        if (auto mv = monitor_violation(s.monitor)) return violated(r, mv->first, mv->second);
        if (o.kind == StepOutcome::Kind::Stuck) return violated(r, "Progress", o.reason);
        if (o.kind == StepOutcome::Kind::IsValue) break;
        ++r.steps;
        e = o.expr;
        if (!cfg.check_each_step && !is_value(*e)) continue;
        try {
            auto [t1, eff1] = type_of(e);
            if (t1 != t0)
                return violated(r, "Preservation",
                                "type " + to_string(t0) + " became " + to_string(t1) + " after " + o.rule);
            if (!effect_subset(eff1, eff0))
                return violated(r, "Preservation",
                                "effect " + to_string(eff1) + " exceeds " + to_string(eff0) + " after " + o.rule);
        } catch (const CompileError& ce) {
            return violated(r, "Preservation", std::string(ce.what()) + " after " + o.rule);
        }
        if (auto wf = well_formed_report(s); !wf.ok) return violated(r, "WellFormed", wf.violations.front());
    }
    auto v = expr_to_value(*e);
    if (!v || v->is_undef()) return violated(r, "NoUndef", "final value is undefined");
    r.value = v;
    return r;
}

SuiteResult run_property_suite(std::size_t n, uint64_t seed, const GenConfig& gcfg, const PropertyConfig& pcfg,
                               unsigned threads) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!threads) threads = std::max(1u, std::thread::hardware_concurrency());
    SuiteResult res;
    res.programs = n;
    std::atomic<std::size_t> next{0};
    std::atomic<uint64_t> steps{0};
    std::atomic<uint64_t> depth{0};
    std::atomic<std::size_t> passed{0};
    std::mutex mu;
    const ExternalWorld world = generator_world();

    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            const uint64_t s = sub_seed(seed, i);
            PropertyFailure fail;
            fail.seed = s;
            try {
                Generated g = generate_program(s, gcfg);
                for (const auto& d : g.program.decls)
                    if (const auto* f = std::get_if<FunDecl>(&d)) {
                        const uint64_t dd = expr_depth(*f->body);
                        uint64_t cur = depth.load();
                        while (dd > cur && !depth.compare_exchange_weak(cur, dd)) {
                        }
                    }
                PropertyReport rep = audit_program(g.typed, "main", world, pcfg);
                steps += rep.steps;
                if (rep.ok) {
                    ++passed;
                    continue;
                }
                fail.report = rep;
                fail.source = g.source;
                const std::string prop = rep.property;
                Program small = shrink_program(g.program, [&](const TypedProgram& tp) {
                    const PropertyReport again = audit_program(tp, "main", world, pcfg);
                    return !again.ok && again.property == prop;
                });
                fail.shrunk = print_program(small);
            } catch (const std::exception& ex) {
                fail.report.ok = false;
                fail.report.property = "Generator";
                fail.report.detail = ex.what();
            }
            std::lock_guard<std::mutex> lock(mu);
            res.failures.push_back(std::move(fail));
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    res.passed = passed;
    res.total_steps = steps;
    res.max_depth_seen = depth;
    std::sort(res.failures.begin(), res.failures.end(),
              [](const PropertyFailure& a, const PropertyFailure& b) { return a.seed < b.seed; });
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

} // namespace beepl
