// Copyright (c) BeePL toolchain contributors.
// SPDX-License-Identifier: Apache-2.0
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "beepl/driver.hpp"

namespace beepl {

using nlohmann::json;

std::string suite_json(const SuiteResult& r) {
    json j = {{"programs", r.programs},         {"passed", r.passed},   {"total_steps", r.total_steps},
              {"max_depth", r.max_depth_seen}, {"seconds", r.seconds}, {"failures", json::array()}};
    for (const auto& f : r.failures)
        j["failures"].push_back({{"seed", f.seed},
                                 {"property", f.report.property},
                                 {"detail", f.report.detail},
                                 {"steps", f.report.steps},
                                 {"source", f.source},
                                 {"shrunk", f.shrunk}});
    return j.dump(2);
}

std::string diff_json(const DiffResult& r) {
    json j = {{"skipped", r.skipped}, {"skip_reason", r.skip_reason}, {"compiler", r.compiler},
              {"programs", r.programs}, {"agreed", r.agreed},         {"seconds", r.seconds},
              {"mismatches", json::array()}};
    for (const auto& m : r.mismatches)
        j["mismatches"].push_back({{"seed", m.seed},
                                   {"interp", m.interp},
                                   {"native", m.native},
                                   {"exit_code", m.exit_code},
                                   {"detail", m.detail},
                                   {"source", m.source}});
    return j.dump(2);
}

std::string corpus_json(const std::vector<CorpusCheck>& r) {
    json j = json::array();
    for (const auto& c : r) j.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    return j.dump(2);
}

std::string suite_summary(const SuiteResult& r) {
    std::ostringstream o;
    o << r.passed << "/" << r.programs << " programs satisfy every property (" << r.total_steps << " steps, depth <= "
      << r.max_depth_seen << ", " << std::fixed << std::setprecision(2) << r.seconds << "s)";
    for (const auto& f : r.failures) {
        o << "\n  seed " << f.seed << ": " << f.report.property << ": " << f.report.detail;
        if (!f.shrunk.empty()) o << "\n  shrunk:\n" << f.shrunk;
    }
    return o.str();
}

std::string diff_summary(const DiffResult& r) {
    std::ostringstream o;
    if (r.skipped) {
        o << "differential run skipped: " << r.skip_reason;
        return o.str();
    }
    o << r.agreed << "/" << r.programs << " programs agree with " << r.compiler << " (" << std::fixed
      << std::setprecision(2) << r.seconds << "s)";
    for (const auto& m : r.mismatches) o << "\n  seed " << m.seed << ": " << m.detail;
    return o.str();
}

} // namespace beepl
