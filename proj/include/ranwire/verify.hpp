#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ranwire {

// One oracle-vs-closed-form comparison. Rows whose lemma tag ends in
// "_info" are informational (reported, never gated on).
struct LemmaRow {
    std::string lemma;
    std::string config;
    double closed_form = 0.0;
    double oracle = 0.0;
    double abs_err = 0.0;
    double tolerance = 0.0;  // allowed |closed_form - oracle| for gating rows
    bool pass = true;
    bool informational = false;
};

struct VerifyOptions {
    int max_nodes = 7;                    // exact-enumeration grid limit
    std::vector<double> p_list = {0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
    double tolerance = 1e-9;
    std::uint64_t seed = 1;
    std::int64_t mc_samples = 100000;     // Monte-Carlo rows
};

struct VerifyReport {
    std::vector<LemmaRow> rows;
    bool all_pass = true;
    const LemmaRow* first_failure() const;
};

// Runs the full oracle-vs-closed-form suite: per-length and total path
// counts, the mean-length ratio identity (plus the Monte-Carlo
// mean-of-ratio gap, informational), interior-edge mean lengths (plus
// boundary-edge deviations, informational), the ResNet special case,
// DropPath covariances and the linear path decomposition.
VerifyReport verify_lemmas(const VerifyOptions& opts);

std::string report_to_csv(const VerifyReport& report);

// length,value rows; `value` printed with %.17g (or exact integers).
void write_csv(const std::string& path, const std::string& content);

// Dependency-free SVG bar chart (bars plus axis labels).
std::string svg_bar_chart(const std::vector<std::pair<int, double>>& bars,
                          const std::string& title);

}  // namespace ranwire
