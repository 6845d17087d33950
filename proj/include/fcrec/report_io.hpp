#pragma once

#include "fcrec/evaluation.hpp"

#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fcrec {

/// Ordered configuration echo printed at the top of every report, so any
/// emitted number can be traced back to its full setup.
struct ReportEcho {
    std::vector<std::pair<std::string, std::string>> fields;

    void add(std::string key, std::string value) {
        fields.emplace_back(std::move(key), std::move(value));
    }
};

std::string formatMetric(double value); // fixed 4 decimals, '.' separator

/// Comment-style echo plus `method,metric,topn,value,cells,excluded` rows;
/// per-topN rows first, then `avg` rows per method. Undefined values leave
/// the value column empty. Output is byte-deterministic.
void writeCsvReport(std::ostream& out, const ReportEcho& echo,
                    std::span<const MethodReport> reports);

/// Aligned per-method blocks: one row per metric, one column per topN plus
/// the across-topN average. Byte-deterministic.
void writeTableReport(std::ostream& out, const ReportEcho& echo,
                      std::span<const MethodReport> reports);

} // namespace fcrec
