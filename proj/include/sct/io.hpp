// Serialization of class data, character tables, and verification reports.
// JSON documents carry exact values as coefficient tuples over the power
// basis of the declared cyclotomic order; the CSV view renders the same
// values as polynomials in z (a fixed primitive root of unity of that
// order) and, in a clearly marked trailing block, as decimal
// approximations intended for reading only.
#pragma once

#include <cmath>
#include <cstdio>
#include <ctime>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sct/superchar.hpp"
#include "sct/verify.hpp"

namespace sct {

inline nlohmann::json cyclo_coeffs(const CycloNumber& x) {
    nlohmann::json a = nlohmann::json::array();
    for (const mpq_class& q : x.c) a.push_back(q.get_str());
    return a;
}

inline std::string cyclo_text(const CycloNumber& x) {
    std::string s;
    for (size_t i = 0; i < x.c.size(); ++i) {
        const mpq_class& q = x.c[i];
        if (q == 0) continue;
        std::string coeff = q.get_str();
        bool neg = coeff[0] == '-';
        std::string mag = neg ? coeff.substr(1) : coeff;
        std::string term;
        if (i == 0)
            term = mag;
        else {
            std::string pw = i == 1 ? "z" : "z^" + std::to_string(i);
            term = mag == "1" ? pw : mag + "*" + pw;
        }
        if (s.empty())
            s = (neg ? "-" : "") + term;
        else
            s += (neg ? " - " : " + ") + term;
    }
    return s.empty() ? "0" : s;
}

inline std::pair<double, double> cyclo_approx(const CycloNumber& x) {
    double re = 0.0, im = 0.0;
    if (!x.F) return {re, im};
    for (size_t i = 0; i < x.c.size(); ++i) {
        if (x.c[i] == 0) continue;
        double c = x.c[i].get_d();
        double ang = 2.0 * std::numbers::pi * (double)i / (double)x.F->N;
        re += c * std::cos(ang);
        im += c * std::sin(ang);
    }
    return {re, im};
}

inline std::string approx_text(const CycloNumber& x) {
    auto [re, im] = cyclo_approx(x);
    if (std::abs(re) < 5e-10) re = 0.0;
    if (std::abs(im) < 5e-10) im = 0.0;
    char buf[64];
    if (im == 0.0) {
        std::snprintf(buf, sizeof buf, "%.6g", re);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", re, im);
    return buf;
}

// ---- JSON documents --------------------------------------------------------

inline nlohmann::json classes_json(const std::string& domain, bool whole,
                                   unsigned long order,
                                   const std::vector<Superclass>& cls) {
    nlohmann::json out;
    out["domain"] = domain;
    out["level"] = whole ? "whole" : "unipotent";
    out["order"] = order;
    out["class_count"] = cls.size();
    nlohmann::json arr = nlohmann::json::array();
    for (size_t i = 0; i < cls.size(); ++i) {
        const Superclass& k = cls[i];
        nlohmann::json e;
        e["index"] = i;
        e["label"] = label_text(k.label);
        e["size"] = k.size();
        if (whole) {
            nlohmann::json mem = nlohmann::json::array();
            for (auto [li, code] : k.pairs) mem.push_back({li, code});
            e["representative"] = {k.pairs.front().first, k.pairs.front().second};
            e["members"] = std::move(mem);
        } else {
            e["representative"] = k.members.front();
            e["members"] = k.members;
        }
        arr.push_back(std::move(e));
    }
    out["classes"] = std::move(arr);
    return out;
}

inline nlohmann::json classes_json(const SupercharTheory& th) {
    return classes_json(th.group, th.group_level, th.order, th.classes);
}

inline nlohmann::json characters_json(const SupercharTheory& th) {
    nlohmann::json out;
    out["domain"] = th.group;
    out["level"] = th.group_level ? "whole" : "unipotent";
    out["cyclotomic_order"] = th.F->N;
    out["basis_degree"] = th.F->d;
    out["class_labels"] = nlohmann::json::array();
    for (const Superclass& k : th.classes) out["class_labels"].push_back(label_text(k.label));
    nlohmann::json arr = nlohmann::json::array();
    for (size_t r = 0; r < th.table.size(); ++r) {
        nlohmann::json e;
        e["name"] = th.names.at(r);
        e["degree"] = cyclo_text(th.table[r].at(th.identity_class));
        nlohmann::json vals = nlohmann::json::array();
        for (const CycloNumber& v : th.table[r]) vals.push_back(cyclo_coeffs(v));
        e["values"] = std::move(vals);
        arr.push_back(std::move(e));
    }
    out["characters"] = std::move(arr);
    return out;
}

inline nlohmann::json report_json(const VerificationReport& rep, bool with_timing = false) {
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& c : rep.checks) {
        nlohmann::json j;
        j["name"] = c.name;
        j["passed"] = c.passed;
        j["witness"] = c.witness;
        if (with_timing) j["seconds"] = c.seconds;
        checks.push_back(std::move(j));
    }
    nlohmann::json out;
    out["all_passed"] = rep.all_passed();
    out["checks"] = std::move(checks);
    return out;
}

// ---- CSV view --------------------------------------------------------------

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

// One grid per theory: class header, class sizes, then a row per character.
// With approximations on, the grid is repeated in decimals under a marker
// line; those numbers are for reading, not computing.
inline std::string table_csv(const SupercharTheory& th, bool approx = true) {
    std::string head = "character";
    std::string sizes = "class size";
    for (size_t j = 0; j < th.classes.size(); ++j) {
        head += "," + csv_escape("K" + std::to_string(j) + " " + label_text(th.classes[j].label));
        sizes += "," + std::to_string(th.classes[j].size());
    }
    std::string out = "# " + th.group + ", values in Q(z), z a primitive root of unity of order " +
                      std::to_string(th.F->N) + "\n";
    out += head + "\n" + sizes + "\n";
    for (size_t r = 0; r < th.table.size(); ++r) {
        std::string row = csv_escape(th.names[r]);
        for (const CycloNumber& v : th.table[r]) row += "," + csv_escape(cyclo_text(v));
        out += row + "\n";
    }
    if (approx) {
        out += "\n# decimal approximation, display only\n" + head + "\n";
        for (size_t r = 0; r < th.table.size(); ++r) {
            std::string row = csv_escape(th.names[r]);
            for (const CycloNumber& v : th.table[r]) row += "," + csv_escape(approx_text(v));
            out += row + "\n";
        }
    }
    return out;
}

// ---- document assembly -----------------------------------------------------

inline std::string utc_stamp() {
    std::time_t t = std::time(nullptr);
    std::tm g{};
    gmtime_r(&t, &g);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &g);
    return buf;
}

// Re-running the same configuration reproduces these bytes exactly once the
// stamp is turned off.
inline std::string json_document(nlohmann::json j, bool timestamp) {
    if (timestamp) j["generated_at"] = utc_stamp();
    return j.dump(2) + "\n";
}

inline std::string csv_document(const std::string& body, bool timestamp) {
    if (timestamp) return "# generated " + utc_stamp() + "\n" + body;
    return body;
}

}  // namespace sct
