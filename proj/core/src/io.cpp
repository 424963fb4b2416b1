// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "semiflow/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace semiflow {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

void JsonWriter::comma() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!need_comma_.empty()) {
        if (need_comma_.back()) out_ += ',';
        need_comma_.back() = true;
    }
}

JsonWriter& JsonWriter::begin_object() {
    comma();
    out_ += '{';
    need_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    need_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    comma();
    out_ += '[';
    need_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    need_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    comma();
    out_ += '"';
    out_ += k;
    out_ += "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    comma();
    out_ += std::isfinite(v) ? format_double(v) : "null";    // JSON has no inf/nan
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& s) {
    comma();
    out_ += '"';
    for (char c : s) {
        if (c == '"' || c == '\\') out_ += '\\';
        out_ += c;
    }
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::value(bool b) {
    comma();
    out_ += b ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value_int(long long v) {
    comma();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value_null() {
    comma();
    out_ += "null";
    return *this;
}

JsonWriter& JsonWriter::value(Complex z) {
    begin_array();
    value(z.real());
    value(z.imag());
    return end_array();
}

JsonWriter& JsonWriter::value(const TruncatedSeries& s) {
    begin_array();
    for (std::size_t n = 0; n <= s.trunc_order(); ++n) value(s.coeff(n));
    return end_array();
}

namespace {

double parse_real_token(const std::string& tok) {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("parse_complex: trailing characters in '" + tok + "'");
    return v;
}

// Splits "a+bi" into its real and imaginary parts.
Complex parse_complex_impl(std::string s) {
    std::string clean;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) clean += c;
    if (clean.empty()) throw std::invalid_argument("parse_complex: empty literal");

    // Find a +/- separating the two parts (not an exponent sign, not leading).
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < clean.size(); ++i) {
        const char c = clean[i];
        if ((c == '+' || c == '-') && clean[i - 1] != 'e' && clean[i - 1] != 'E') split = i;
    }

    auto imag_token = [](std::string t) {
        if (t.empty() || (t.back() != 'i' && t.back() != 'I'))
            throw std::invalid_argument("parse_complex: expected imaginary part");
        t.pop_back();
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_real_token(t);
    };

    const bool ends_i = clean.back() == 'i' || clean.back() == 'I';
    if (split == std::string::npos) {
        if (ends_i) return Complex(0.0, imag_token(clean));
        return Complex(parse_real_token(clean), 0.0);
    }
    if (!ends_i) throw std::invalid_argument("parse_complex: malformed literal '" + s + "'");
    return Complex(parse_real_token(clean.substr(0, split)), imag_token(clean.substr(split)));
}

}  // namespace

Complex parse_complex(const std::string& text) { return parse_complex_impl(text); }

std::vector<Complex> parse_coefficients(const std::string& comma_separated) {
    std::vector<Complex> out;
    std::string token;
    for (char c : comma_separated) {
        if (c == ',') {
            out.push_back(parse_complex(token));
            token.clear();
        } else {
            token += c;
        }
    }
    if (!token.empty() || out.empty()) out.push_back(parse_complex(token));
    return out;
}

WeightSequence parse_weight_kind(const std::string& name) {
    if (name == "hardy") return WeightSequence::hardy();
    if (name == "dirichlet") return WeightSequence::dirichlet();
    if (name == "bergman") return WeightSequence::bergman();
    throw std::invalid_argument("unknown weight kind '" + name + "' (hardy|dirichlet|bergman)");
}

std::string condition_report_json(const TruncatedSeries& G, const ConditionReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("generator").value(G);

    w.key("condition_a").begin_object();
    w.key("value").value(report.condition_a.value);
    w.key("pass").value(report.condition_a.pass);
    w.key("marginal").value(report.condition_a.marginal);
    w.end_object();

    w.key("condition_b").begin_object();
    w.key("max").value(report.condition_b.max_value);
    w.key("arg_max").value(report.condition_b.arg_max);
    w.key("pass").value(report.condition_b.pass);
    w.key("marginal").value(report.condition_b.marginal);
    w.key("points").value_int(static_cast<long long>(report.condition_b.points_evaluated));
    w.end_object();

    w.key("condition_c").begin_object();
    w.key("boundary_max").value(report.condition_c.boundary_max);
    w.key("theta_max").value(report.condition_c.theta_max);
    w.key("method").value(report.condition_c.method);
    w.key("pass").value(report.condition_c.pass);
    w.key("marginal").value(report.condition_c.marginal);
    w.end_object();

    w.key("root_obstruction").begin_object();
    w.key("obstructed").value(report.root_obstruction.obstructed);
    w.key("roots").begin_array();
    for (Complex r : report.root_obstruction.roots) w.value(r);
    w.end_array();
    w.key("min_abs_root");
    if (std::isfinite(report.root_obstruction.min_abs_root))
        w.value(report.root_obstruction.min_abs_root);
    else
        w.value_null();
    w.end_object();

    w.key("verdict").value(to_string(report.verdict));
    w.key("notes").begin_array();
    for (const std::string& n : report.notes) w.value(n);
    for (const std::string& n : report.condition_c.notes) w.value(n);
    w.end_array();
    w.end_object();
    return w.take();
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,re,im,speed\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out += format_double(traj.times[i]);
        out += ',';
        out += format_double(traj.points[i].real());
        out += ',';
        out += format_double(traj.points[i].imag());
        out += ',';
        out += format_double(traj.speeds[i]);
        out += '\n';
    }
    return out;
}

std::string trajectory_json(const Trajectory& traj, const std::string& variant,
                            const TruncatedSeries& G) {
    JsonWriter w;
    w.begin_object();
    w.key("variant").value(variant);
    w.key("generator").value(G);
    const char* status = "complete";
    if (traj.status == Trajectory::Status::BoundaryExit) status = "boundary-exit";
    if (traj.status == Trajectory::Status::StepUnderflow) status = "step-underflow";
    w.key("status").value(status);
    w.key("note").value(traj.note);
    w.key("samples").begin_array();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        w.begin_array();
        w.value(traj.times[i]);
        w.value(traj.points[i].real());
        w.value(traj.points[i].imag());
        w.value(traj.speeds[i]);
        w.end_array();
    }
    w.end_array();
    w.end_object();
    return w.take();
}

std::string berkson_porta_json(Complex alpha, const BerksonPortaResult& result) {
    JsonWriter w;
    w.begin_object();
    w.key("alpha").value(alpha);
    w.key("factor").value(result.factor);
    w.key("re_min").value(result.re_min);
    w.key("theta_min").value(result.theta_min);
    w.key("pass").value(result.pass);
    w.key("residual").value(result.residual);
    w.key("notes").begin_array();
    for (const std::string& n : result.notes) w.value(n);
    w.end_array();
    w.end_object();
    return w.take();
}

namespace {

const char* verdict_name(ToeplitzTestResult::Verdict v) {
    switch (v) {
        case ToeplitzTestResult::Verdict::PositiveDefinite: return "pd";
        case ToeplitzTestResult::Verdict::PositiveSemiDefinite: return "psd";
        case ToeplitzTestResult::Verdict::Indefinite: return "indefinite";
    }
    return "?";
}

}  // namespace

std::string toeplitz_json(const std::vector<ToeplitzTestResult>& results) {
    JsonWriter w;
    w.begin_object();
    w.key("orders").begin_array();
    for (const ToeplitzTestResult& r : results) {
        w.begin_object();
        w.key("k").value_int(static_cast<long long>(r.order));
        w.key("min_eigenvalue").value(r.min_eigenvalue);
        w.key("leading_minors").begin_array();
        for (double m : r.leading_minors) w.value(m);
        w.end_array();
        w.key("verdict").value(verdict_name(r.verdict));
        w.end_object();
    }
    w.end_array();
    w.key("all_psd").value(toeplitz_all_psd(results));
    w.end_object();
    return w.take();
}

std::string toeplitz_matrices_csv(const std::vector<ToeplitzTestResult>& results) {
    std::string out;
    for (const ToeplitzTestResult& r : results) {
        out += "# N_" + std::to_string(r.order) + "\n";
        for (long i = 0; i < r.n_matrix.rows(); ++i) {
            for (long j = 0; j < r.n_matrix.cols(); ++j) {
                if (j) out += ',';
                out += format_double(r.n_matrix(i, j).real());
                out += ',';
                out += format_double(r.n_matrix(i, j).imag());
            }
            out += '\n';
        }
    }
    return out;
}

std::string section_csv(const FiniteSection& section) {
    std::string out;
    for (long i = 0; i < section.entries.rows(); ++i) {
        for (long j = 0; j < section.entries.cols(); ++j) {
            if (j) out += ',';
            out += format_double(section.entries(i, j).real());
            out += ',';
            out += format_double(section.entries(i, j).imag());
        }
        out += '\n';
    }
    return out;
}

std::string section_json(const FiniteSection& section) {
    JsonWriter w;
    w.begin_object();
    w.key("kind").value(section.kind == FiniteSection::Kind::Composition ? "composition"
                                                                         : "generator");
    w.key("space").value(section.space.name());
    w.key("dim").value_int(static_cast<long long>(section.dim));
    w.key("symbol").value(section.symbol);
    w.key("tail_mass").value(section.tail_mass);
    w.key("reliable").value(section.reliable);
    w.key("entries").begin_array();
    for (long i = 0; i < section.entries.rows(); ++i) {
        w.begin_array();
        for (long j = 0; j < section.entries.cols(); ++j) w.value(section.entries(i, j));
        w.end_array();
    }
    w.end_array();
    w.end_object();
    return w.take();
}

std::string probe_sweep_csv(const std::vector<std::pair<double, double>>& rows,
                            const std::string& param_name) {
    std::string out = param_name + ",re_part\n";
    for (const auto& [param, re] : rows) {
        out += format_double(param);
        out += ',';
        out += format_double(re);
        out += '\n';
    }
    return out;
}

std::string series_json(const TruncatedSeries& s) {
    JsonWriter w;
    w.value(s);
    return w.take();
}

}  // namespace semiflow
