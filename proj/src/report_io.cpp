#include "fcrec/report_io.hpp"

#include <cstdio>

namespace fcrec {

std::string formatMetric(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    return buf;
}

namespace {

void writeEcho(std::ostream& out, const ReportEcho& echo) {
    for (const auto& [key, value] : echo.fields)
        out << "# " << key << ": " << value << '\n';
}

std::string optionalMetric(const std::optional<double>& value) {
    return value ? formatMetric(*value) : std::string();
}

// Exclusions behind a precision/recall mean: zero-denominator cells under
// micro averaging, zero-denominator users under macro (where cells only go
// undefined when every user in them did).
long long exclusions(const TopNSummary& s, bool precision) {
    if (precision)
        return (s.cells - s.precisionDefinedCells) + s.precisionExcludedUsers;
    return (s.cells - s.recallDefinedCells) + s.recallExcludedUsers;
}

} // namespace

void writeCsvReport(std::ostream& out, const ReportEcho& echo,
                    std::span<const MethodReport> reports) {
    writeEcho(out, echo);
    out << "method,metric,topn,value,cells,excluded\n";
    for (const auto& report : reports) {
        const auto& name = report.spec.name;
        for (const auto& s : report.perTopN) {
            out << name << ",mae," << s.topN << ',' << formatMetric(s.mean.mae) << ',' << s.cells
                << ",0\n";
            out << name << ",accuracy," << s.topN << ',' << formatMetric(s.mean.accuracy) << ','
                << s.cells << ",0\n";
            out << name << ",precision," << s.topN << ',' << optionalMetric(s.mean.precision)
                << ',' << s.precisionDefinedCells << ',' << exclusions(s, true) << '\n';
            out << name << ",recall," << s.topN << ',' << optionalMetric(s.mean.recall) << ','
                << s.recallDefinedCells << ',' << exclusions(s, false) << '\n';
        }
        const auto& avg = report.acrossTopN;
        const auto total = static_cast<long long>(report.perTopN.size());
        long long precDefined = 0;
        long long recDefined = 0;
        for (const auto& s : report.perTopN) {
            if (s.mean.precision)
                ++precDefined;
            if (s.mean.recall)
                ++recDefined;
        }
        out << name << ",mae,avg," << formatMetric(avg.mae) << ',' << total << ",0\n";
        out << name << ",accuracy,avg," << formatMetric(avg.accuracy) << ',' << total << ",0\n";
        out << name << ",precision,avg," << optionalMetric(avg.precision) << ',' << precDefined
            << ',' << (total - precDefined) << '\n';
        out << name << ",recall,avg," << optionalMetric(avg.recall) << ',' << recDefined << ','
            << (total - recDefined) << '\n';
    }
}

void writeTableReport(std::ostream& out, const ReportEcho& echo,
                      std::span<const MethodReport> reports) {
    writeEcho(out, echo);
    char buf[64];
    for (const auto& report : reports) {
        out << "\n== " << report.spec.name << " ==\n";
        std::snprintf(buf, sizeof buf, "%-10s", "metric");
        out << buf;
        for (const auto& s : report.perTopN) {
            char head[32];
            std::snprintf(head, sizeof head, "top-%d", s.topN);
            std::snprintf(buf, sizeof buf, "%10s", head);
            out << buf;
        }
        std::snprintf(buf, sizeof buf, "%10s", "avg");
        out << buf << '\n';

        auto row = [&](const char* label, auto pick, auto pickAvg) {
            std::snprintf(buf, sizeof buf, "%-10s", label);
            out << buf;
            for (const auto& s : report.perTopN) {
                const std::string text = pick(s);
                std::snprintf(buf, sizeof buf, "%10s", text.empty() ? "-" : text.c_str());
                out << buf;
            }
            const std::string text = pickAvg(report.acrossTopN);
            std::snprintf(buf, sizeof buf, "%10s", text.empty() ? "-" : text.c_str());
            out << buf << '\n';
        };
        row(
            "mae", [](const TopNSummary& s) { return formatMetric(s.mean.mae); },
            [](const MeanMetrics& m) { return formatMetric(m.mae); });
        row(
            "accuracy", [](const TopNSummary& s) { return formatMetric(s.mean.accuracy); },
            [](const MeanMetrics& m) { return formatMetric(m.accuracy); });
        row(
            "precision", [](const TopNSummary& s) { return optionalMetric(s.mean.precision); },
            [](const MeanMetrics& m) { return optionalMetric(m.precision); });
        row(
            "recall", [](const TopNSummary& s) { return optionalMetric(s.mean.recall); },
            [](const MeanMetrics& m) { return optionalMetric(m.recall); });
    }
}

} // namespace fcrec
