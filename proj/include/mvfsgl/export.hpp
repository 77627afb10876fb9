#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "mvfsgl/csv.hpp"
#include "mvfsgl/model.hpp"
#include "mvfsgl/types.hpp"

namespace mvfsgl {

namespace detail {

template <typename Scalar>
void append_number(std::string& line, Scalar value, bool first) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", std::numeric_limits<Scalar>::max_digits10,
                  static_cast<double>(value));
    if (!first) line += ',';
    line += buf;
}

}  // namespace detail

/// One data row per iteration, no header. Columns: iteration, objective,
/// penalized objective, the six per-step penalized-objective deltas
/// (view-weights, projections, bases, nonneg-indicator, indicator, graph),
/// then the constraint residuals (indicator orthogonality, basis
/// orthogonality, min Z entry, max |S row sum - 1|, min S entry,
/// |sum delta - 1|, min delta, max |L row sum|).
template <typename Scalar>
std::string trace_to_csv(const RunTrace<Scalar>& trace) {
    std::string out;
    Scalar prev = trace.initial_penalized;
    for (size_t i = 0; i < trace.iterations.size(); ++i) {
        const auto& rec = trace.iterations[i];
        std::string line = std::to_string(i + 1);
        detail::append_number(line, rec.objective, false);
        detail::append_number(line, rec.penalized, false);
        for (const Scalar after : rec.step_penalized) {
            detail::append_number(line, after - prev, false);
            prev = after;
        }
        const auto& r = rec.residuals;
        detail::append_number(line, r.indicator_orth, false);
        detail::append_number(line, r.basis_orth, false);
        detail::append_number(line, r.nonneg_indicator_min, false);
        detail::append_number(line, r.graph_row_sum, false);
        detail::append_number(line, r.graph_min, false);
        detail::append_number(line, r.view_weight_sum, false);
        detail::append_number(line, r.view_weight_min, false);
        detail::append_number(line, r.laplacian_row_sum, false);
        out += line;
        out += '\n';
    }
    return out;
}

/// Writes S.csv, H.csv, delta.csv (one row), per-view W_<v>.csv and
/// trace.csv into `dir`, creating it if needed.
template <typename Scalar>
void write_fit_outputs(const ModelState<Scalar>& state, const RunTrace<Scalar>& trace,
                       const std::string& dir) {
    std::filesystem::create_directories(dir);
    const auto path = [&](const std::string& name) { return (std::filesystem::path(dir) / name).string(); };
    save_matrix_csv(path("S.csv"), state.graph);
    save_matrix_csv(path("H.csv"), state.indicator);
    save_matrix_csv(path("delta.csv"), state.view_weights.transpose());
    for (int v = 0; v < state.view_count(); ++v)
        save_matrix_csv(path("W_" + std::to_string(v + 1) + ".csv"),
                        state.projections[static_cast<size_t>(v)]);
    std::ofstream out(path("trace.csv"));
    if (!out) throw std::runtime_error("cannot write file: " + path("trace.csv"));
    out << trace_to_csv(trace);
    if (!out) throw std::runtime_error("write failed: " + path("trace.csv"));
}

}  // namespace mvfsgl
