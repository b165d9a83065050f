#pragma once

// Text cover-plan format:
//
//   cover-plan 2
//   params <theta> <psi> <C> <M> <N>
//   covers <m>
//   cover                  (m blocks)
//   <x> <y>                three vertices of T_k
//   <x> <y>
//   <x> <y>
//   cluster <count>
//   <id> <id> ...          element ids of Q_k, any number per line
//
// Blank lines and lines starting with '#' are ignored.

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "thinfem/covering.hpp"
#include "thinfem/text_io.hpp"

namespace thinfem {

inline void write_plan(const CoverPlan& plan, std::ostream& out) {
    using text::format_exact;
    const auto& p = plan.params;
    out << "cover-plan 2\n";
    out << "params " << format_exact(p.theta) << ' ' << format_exact(p.psi) << ' ' << format_exact(p.C) << ' '
        << p.M << ' ' << p.N << '\n';
    out << "covers " << plan.covers.size() << '\n';
    for (const auto& c : plan.covers) {
        out << "cover\n";
        for (const auto& v : c.simplex.vertices) out << format_exact(v[0]) << ' ' << format_exact(v[1]) << '\n';
        out << "cluster " << c.cluster.size() << '\n';
        for (std::size_t i = 0; i < c.cluster.size(); ++i) out << (i ? " " : "") << c.cluster[i];
        out << '\n';
    }
}

inline void write_plan(const CoverPlan& plan, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_plan(plan, out);
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline CoverPlan read_plan(std::istream& in) {
    text::LineReader r(in);
    auto head = r.expect_line("header");
    if (head.size() != 2 || head[0] != "cover-plan" || head[1] != "2") r.fail("expected 'cover-plan 2'");
    auto pl = r.expect_line("params");
    if (pl.size() != 6 || pl[0] != "params") r.fail("expected 'params <theta> <psi> <C> <M> <N>'");
    CoverPlan plan;
    plan.params.theta = r.parse<double>(pl[1], "theta");
    plan.params.psi = r.parse<double>(pl[2], "psi");
    plan.params.C = r.parse<double>(pl[3], "C");
    plan.params.M = r.parse<int>(pl[4], "M");
    plan.params.N = r.parse<int>(pl[5], "N");
    const auto m = r.expect_header("covers");
    plan.covers.resize(m);
    for (auto& c : plan.covers) {
        auto t = r.expect_line("cover");
        if (t.size() != 1 || t[0] != "cover") r.fail("expected 'cover'");
        for (auto& v : c.simplex.vertices) {
            auto xy = r.expect_line("cover vertex");
            if (xy.size() != 2) r.fail("expected two coordinates");
            v = {{r.parse<double>(xy[0], "coordinate"), r.parse<double>(xy[1], "coordinate")}};
        }
        const auto count = r.expect_header("cluster");
        while (c.cluster.size() < count) {
            auto ids = r.expect_line("cluster element ids");
            for (auto tok : ids) c.cluster.push_back(r.parse<Index>(tok, "element id"));
            if (c.cluster.size() > count) r.fail("more element ids than declared");
        }
    }
    std::vector<std::string_view> extra;
    if (r.next(extra)) r.fail("trailing content after last cover");
    return plan;
}

inline CoverPlan read_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_plan(in);
}

}  // namespace thinfem
