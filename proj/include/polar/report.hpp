#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "polar/error.hpp"

namespace polar {

/// One line of an experiment report. Rows with asserted = false are
/// measurements kept for the record; they never fail a run.
struct CheckRow {
    std::string tag;    ///< property family, e.g. "jump-limit"
    std::string check;  ///< what was compared
    double eta;
    double eps;
    double value;
    double threshold;
    double t_bar;
    bool pass;
    bool asserted = true;
};

struct ExperimentReport {
    std::string experiment;
    std::string scenario;
    int n = 0;
    std::string regime;
    std::vector<std::pair<std::string, double>> scalars;
    std::vector<CheckRow> rows;

    void scalar(const std::string& key, double v) { scalars.emplace_back(key, v); }

    void check(std::string tag, std::string what, double eta, double eps, double value, double threshold,
               double t_bar, bool pass) {
        rows.push_back(CheckRow{std::move(tag), std::move(what), eta, eps, value, threshold, t_bar, pass, true});
    }

    void info(std::string tag, std::string what, double eta, double eps, double value, double t_bar = NAN) {
        rows.push_back(CheckRow{std::move(tag), std::move(what), eta, eps, value, NAN, t_bar, true, false});
    }

    bool passed() const {
        for (const auto& r : rows) {
            if (r.asserted && !r.pass) return false;
        }
        return true;
    }

    const CheckRow* find(const std::string& tag, const std::string& what) const {
        for (const auto& r : rows) {
            if (r.tag == tag && r.check == what) return &r;
        }
        return nullptr;
    }

    static std::string num(double v) {
        if (std::isnan(v)) return "nan";
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    /// Columns: experiment,tag,check,eta,eps,value,threshold,t_bar,asserted,pass
    void write_csv(std::ostream& os) const {
        os << "experiment,tag,check,eta,eps,value,threshold,t_bar,asserted,pass\n";
        for (const auto& r : rows) {
            os << experiment << ',' << r.tag << ',' << r.check << ',' << num(r.eta) << ',' << num(r.eps) << ','
               << num(r.value) << ',' << num(r.threshold) << ',' << num(r.t_bar) << ',' << (r.asserted ? 1 : 0)
               << ',' << (r.pass ? 1 : 0) << '\n';
        }
    }

    void write_summary(std::ostream& os) const {
        os << experiment << " (scenario " << scenario << ", n = " << n << ")";
        if (!regime.empty()) os << ", regime " << regime;
        os << '\n';
        for (const auto& [k, v] : scalars) os << "  " << k << " = " << num(v) << '\n';
        std::size_t asserted = 0, failed = 0;
        for (const auto& r : rows) {
            if (!r.asserted) continue;
            ++asserted;
            if (!r.pass) {
                ++failed;
                os << "  FAIL " << r.tag << ": " << r.check << " (eta " << num(r.eta) << ", eps " << num(r.eps)
                   << ", value " << num(r.value) << ", threshold " << num(r.threshold) << ")\n";
            }
        }
        os << "  " << (asserted - failed) << "/" << asserted << " checks passed\n";
    }

    void write_files(const std::filesystem::path& dir) const {
        std::filesystem::create_directories(dir);
        std::ofstream csv(dir / (experiment + ".csv"));
        write_csv(csv);
        std::ofstream txt(dir / (experiment + "_summary.txt"));
        write_summary(txt);
        if (!csv || !txt) throw Error(ErrorCode::IoError, "cannot write report under " + dir.string());
    }
};

}  // namespace polar
