// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "semiflow/flow.hpp"
#include "semiflow/generator.hpp"
#include "semiflow/operators.hpp"
#include "semiflow/series.hpp"

namespace semiflow {

// Deterministic output: fixed key order, every float printed as %.12e, so a
// repeated job yields byte-identical bytes.

std::string format_double(double v);

/// Tiny ordered JSON emitter; numbers go through format_double.
class JsonWriter {
public:
    std::string take() { return std::move(out_); }

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(const std::string& s);
    JsonWriter& value(const char* s) { return value(std::string(s)); }
    JsonWriter& value(bool b);
    JsonWriter& value_int(long long v);
    JsonWriter& value_null();
    JsonWriter& value(Complex z);    // [re, im]
    JsonWriter& value(const TruncatedSeries& s);

private:
    void comma();
    std::string out_;
    std::vector<bool> need_comma_;
    bool pending_key_ = false;
};

// Complex literals: "1.5", "-2i", "1+2i", "3e-2-1.5e1i", "i", "-i".
Complex parse_complex(const std::string& text);
std::vector<Complex> parse_coefficients(const std::string& comma_separated);

/// "hardy" | "dirichlet" | "bergman"; custom tables come through job files.
WeightSequence parse_weight_kind(const std::string& name);

std::string condition_report_json(const TruncatedSeries& G, const ConditionReport& report);
std::string trajectory_csv(const Trajectory& traj);
std::string trajectory_json(const Trajectory& traj, const std::string& variant,
                            const TruncatedSeries& G);
std::string berkson_porta_json(Complex alpha, const BerksonPortaResult& result);
std::string toeplitz_json(const std::vector<ToeplitzTestResult>& results);
std::string toeplitz_matrices_csv(const std::vector<ToeplitzTestResult>& results);
std::string section_csv(const FiniteSection& section);    // re/im interleaved
std::string section_json(const FiniteSection& section);
std::string probe_sweep_csv(const std::vector<std::pair<double, double>>& rows,
                            const std::string& param_name);

std::string series_json(const TruncatedSeries& s);

}  // namespace semiflow
