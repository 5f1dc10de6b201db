// Line-oriented workspace format: [field] / [quiver] / [potential] / [rep] /
// [unfolding] sections, with line-numbered diagnostics and a print side that
// round-trips exactly.
#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spforge/dreps.hpp"
#include "spforge/unfold.hpp"

namespace spf {

struct Workspace {
  std::shared_ptr<const FieldTower> tw;
  std::shared_ptr<const WeightedQuiver> q;
  int trunc = kDefaultTrunc;
  std::optional<AlgebraElement> S;
  std::optional<DecoratedRep> rep;
  std::optional<Unfolding> unfolding;
};

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

inline std::vector<long long> split_ints(const std::string& s, int line_no) {
  std::vector<long long> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) {
    try {
      size_t pos = 0;
      long long v = std::stoll(cur, &pos);
      require(pos == cur.size(), errc::parse_error, "");
      out.push_back(v);
    } catch (...) {
      fail(errc::parse_error,
           "line " + std::to_string(line_no) + ": bad integer list '" + s + "'");
    }
  }
  require(!out.empty(), errc::parse_error,
          "line " + std::to_string(line_no) + ": empty integer list");
  return out;
}

// key=value pairs on a section header line
inline std::string header_value(const std::vector<std::string>& toks, const std::string& key,
                                int line_no, bool optional_key = false) {
  for (size_t i = 1; i < toks.size(); ++i) {
    if (toks[i].rfind(key + "=", 0) == 0) return toks[i].substr(key.size() + 1);
  }
  if (optional_key) return "";
  fail(errc::parse_error,
       "line " + std::to_string(line_no) + ": missing " + key + "= on section header");
}

inline KElem parse_kelem(const FieldTower& tw, const std::string& s, int line_no) {
  std::vector<long long> vals = split_ints(s, line_no);
  require(int(vals.size()) == tw.base_m || vals.size() == 1, errc::parse_error,
          "line " + std::to_string(line_no) + ": coefficient needs " +
              std::to_string(tw.base_m) + " components");
  KElem out = tw.k_zero();
  for (size_t i = 0; i < vals.size(); ++i) {
    long long v = vals[i] % (long long)tw.p;
    if (v < 0) v += (long long)tw.p;
    out[i] = (u64)v;
  }
  return out;
}

inline std::string format_kelem(const FieldTower& tw, const KElem& x) {
  std::ostringstream os;
  for (int i = 0; i < tw.base_m; ++i) {
    if (i) os << ",";
    os << x[i];
  }
  return os.str();
}

// term tokens: optional v^j, then arrow, alternating; a trailing v^j allowed
inline Path parse_term(const WeightedQuiver& q, const std::vector<std::string>& toks,
                       size_t first, int line_no) {
  Path p;
  std::vector<int> slots;
  bool slot_seen = false;
  int pending_slot = 0;
  for (size_t i = first; i < toks.size(); ++i) {
    const std::string& t = toks[i];
    if (t.rfind("v^", 0) == 0) {
      require(!slot_seen, errc::parse_error,
              "line " + std::to_string(line_no) + ": two consecutive slots");
      try {
        pending_slot = std::stoi(t.substr(2));
      } catch (...) {
        fail(errc::parse_error, "line " + std::to_string(line_no) + ": bad slot '" + t + "'");
      }
      slot_seen = true;
    } else {
      int idx = q.arrow_index(t);
      require(idx >= 0, errc::parse_error,
              "line " + std::to_string(line_no) + ": unknown arrow '" + t + "'");
      slots.push_back(slot_seen ? pending_slot : 0);
      slot_seen = false;
      pending_slot = 0;
      p.arrows.push_back(idx);
    }
  }
  slots.push_back(slot_seen ? pending_slot : 0);
  p.slots = std::move(slots);
  require(!p.arrows.empty(), errc::parse_error,
          "line " + std::to_string(line_no) + ": empty term");
  p.vertex = q.arrows[p.arrows.front()].head;
  return p;
}

inline std::string format_term(const WeightedQuiver& q, const Path& p) {
  std::ostringstream os;
  for (int i = 0; i <= p.length(); ++i) {
    if (p.slots[i] != 0) os << " v^" << p.slots[i];
    if (i < p.length()) os << " " << q.arrows[p.arrows[i]].name;
  }
  std::string s = os.str();
  return s.empty() ? s : s.substr(1);
}

}  // namespace detail

inline Workspace parse_workspace(const std::string& text, int trunc = kDefaultTrunc) {
  Workspace ws;
  ws.trunc = trunc;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  std::string section;
  // deferred state for multi-line constructs
  std::vector<int> rep_mdims, rep_vdims;
  std::vector<Mat<KF>> rep_act;
  int cur_matrix = -1, rows_needed = 0, cols_needed = 0;
  std::vector<std::vector<KElem>> cur_rows;
  std::vector<int> unf_e;
  std::vector<std::vector<long long>> unf_rows;

  auto finish_matrix = [&](int at_line) {
    if (cur_matrix < 0) return;
    require(int(cur_rows.size()) == rows_needed, errc::parse_error,
            "line " + std::to_string(at_line) + ": matrix for arrow '" +
                ws.q->arrows[cur_matrix].name + "' has " +
                std::to_string(cur_rows.size()) + " rows, expected " +
                std::to_string(rows_needed));
    rep_act[cur_matrix] = cur_rows;
    cur_rows.clear();
    cur_matrix = -1;
  };

  while (std::getline(is, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::vector<std::string> toks = detail::split_tokens(line);
    if (toks.empty()) continue;
    if (toks[0].front() == '[') {
      finish_matrix(line_no);
      section = toks[0];
      if (section == "[field]") {
        u64 p = std::stoull(detail::header_value(toks, "p", line_no));
        int d = std::stoi(detail::header_value(toks, "d", line_no));
        u64 c = std::stoull(detail::header_value(toks, "c", line_no));
        std::string ms = detail::header_value(toks, "m", line_no, true);
        FieldTower t = make_tower(p, d, c);
        if (!ms.empty() && std::stoi(ms) > 1) t = extend_base(t, std::stoi(ms));
        ws.tw = std::make_shared<FieldTower>(std::move(t));
      } else if (section == "[quiver]") {
        require(ws.tw != nullptr, errc::parse_error,
                "line " + std::to_string(line_no) + ": [quiver] before [field]");
        std::vector<long long> w =
            detail::split_ints(detail::header_value(toks, "weights", line_no), line_no);
        WeightedQuiver q;
        for (long long x : w) q.weights.push_back(int(x));
        ws.q = std::make_shared<WeightedQuiver>(std::move(q));
      } else if (section == "[potential]" || section == "[rep]" ||
                 section == "[unfolding]") {
        require(ws.q != nullptr, errc::parse_error,
                "line " + std::to_string(line_no) + ": " + section + " before [quiver]");
        if (section == "[rep]") rep_act.assign(ws.q->arrows.size(), Mat<KF>{});
      } else {
        fail(errc::parse_error,
             "line " + std::to_string(line_no) + ": unknown section " + section);
      }
      continue;
    }
    if (section == "[quiver]") {
      require(toks.size() == 4 && toks[0] == "arrow", errc::parse_error,
              "line " + std::to_string(line_no) + ": expected 'arrow name tail head'");
      // arrows accumulate on a fresh quiver object
      WeightedQuiver q = *ws.q;
      Arrow a;
      a.name = toks[1];
      try {
        a.tail = std::stoi(toks[2]);
        a.head = std::stoi(toks[3]);
      } catch (...) {
        fail(errc::parse_error, "line " + std::to_string(line_no) + ": bad vertex");
      }
      require(a.tail >= 1 && a.tail <= q.n() && a.head >= 1 && a.head <= q.n(),
              errc::validation_error,
              "line " + std::to_string(line_no) + ": vertex out of range");
      require(q.arrow_index(a.name) < 0, errc::validation_error,
              "line " + std::to_string(line_no) + ": duplicate arrow name");
      q.arrows.push_back(std::move(a));
      ws.q = std::make_shared<WeightedQuiver>(std::move(q));
    } else if (section == "[potential]") {
      if (!ws.S) ws.S.emplace(ws.q, ws.tw, ws.trunc);
      KElem cf = detail::parse_kelem(*ws.tw, toks[0], line_no);
      Path p = detail::parse_term(*ws.q, toks, 1, line_no);
      try {
        check_path(*ws.q, *ws.tw, p);
      } catch (const error& e) {
        fail(errc::validation_error,
             "line " + std::to_string(line_no) + ": " + e.what());
      }
      require(path_is_cyclic(*ws.q, p), errc::validation_error,
              "line " + std::to_string(line_no) + ": potential term is not cyclic");
      ws.S->add_term(p, cf);
    } else if (section == "[rep]") {
      if (toks[0] == "mdims" || toks[0] == "vdims") {
        require(toks.size() == 2, errc::parse_error,
                "line " + std::to_string(line_no) + ": expected one integer list");
        std::vector<long long> v = detail::split_ints(toks[1], line_no);
        require(int(v.size()) == ws.q->n(), errc::validation_error,
                "line " + std::to_string(line_no) + ": need one entry per vertex");
        auto& dst = (toks[0] == "mdims") ? rep_mdims : rep_vdims;
        dst.clear();
        for (long long x : v) {
          require(x >= 0, errc::validation_error,
                  "line " + std::to_string(line_no) + ": negative dimension");
          dst.push_back(int(x));
        }
      } else if (toks[0] == "matrix") {
        finish_matrix(line_no);
        require(toks.size() == 2, errc::parse_error,
                "line " + std::to_string(line_no) + ": expected 'matrix <arrow>'");
        require(!rep_mdims.empty(), errc::parse_error,
                "line " + std::to_string(line_no) + ": matrix before mdims");
        cur_matrix = ws.q->arrow_index(toks[1]);
        require(cur_matrix >= 0, errc::parse_error,
                "line " + std::to_string(line_no) + ": unknown arrow '" + toks[1] + "'");
        int h = ws.q->arrows[cur_matrix].head, t = ws.q->arrows[cur_matrix].tail;
        rows_needed = rep_mdims[h - 1] * ws.q->weights[h - 1];
        cols_needed = rep_mdims[t - 1] * ws.q->weights[t - 1];
        if (rows_needed == 0 || cols_needed == 0) {
          rep_act[cur_matrix] =
              mat_zero(KF{ws.tw.get()}, rows_needed, cols_needed);
          cur_matrix = -1;
        }
        cur_rows.clear();
      } else {
        require(cur_matrix >= 0, errc::parse_error,
                "line " + std::to_string(line_no) + ": row outside a matrix block");
        require(int(toks.size()) == cols_needed, errc::parse_error,
                "line " + std::to_string(line_no) + ": row has " +
                    std::to_string(toks.size()) + " entries, expected " +
                    std::to_string(cols_needed));
        std::vector<KElem> row;
        for (const std::string& t : toks) row.push_back(detail::parse_kelem(*ws.tw, t, line_no));
        cur_rows.push_back(std::move(row));
        require(int(cur_rows.size()) <= rows_needed, errc::parse_error,
                "line " + std::to_string(line_no) + ": too many rows");
      }
    } else if (section == "[unfolding]") {
      if (toks[0] == "e") {
        std::vector<long long> v = detail::split_ints(toks[1], line_no);
        require(int(v.size()) == ws.q->n(), errc::validation_error,
                "line " + std::to_string(line_no) + ": need one block size per vertex");
        unf_e.clear();
        for (long long x : v) unf_e.push_back(int(x));
      } else if (toks[0] == "row") {
        require(!unf_e.empty(), errc::parse_error,
                "line " + std::to_string(line_no) + ": row before e");
        unf_rows.push_back(detail::split_ints(toks[1], line_no));
      } else {
        fail(errc::parse_error,
             "line " + std::to_string(line_no) + ": expected 'e' or 'row'");
      }
    } else {
      fail(errc::parse_error,
           "line " + std::to_string(line_no) + ": content outside any section");
    }
  }
  finish_matrix(line_no);
  require(ws.tw && ws.q, errc::parse_error, "missing [field] or [quiver] section");
  ws.q->validate();
  require(ws.q->strongly_primitive(), errc::not_coprime,
          "vertex weights must be pairwise coprime");
  for (int w : ws.q->weights)
    require(ws.tw->d % w == 0, errc::validation_error,
            "vertex weight does not divide the tower degree");
  if (!rep_mdims.empty()) {
    DecoratedRep r;
    r.q = ws.q;
    r.tw = ws.tw;
    r.mdim = rep_mdims;
    r.vdim = rep_vdims.empty() ? std::vector<int>(ws.q->n(), 0) : rep_vdims;
    KF kf{ws.tw.get()};
    for (size_t a = 0; a < ws.q->arrows.size(); ++a) {
      int h = ws.q->arrows[a].head, t = ws.q->arrows[a].tail;
      int rows = r.fdim(h), cols = r.fdim(t);
      if (rep_act[a].empty() && rows > 0) rep_act[a] = mat_zero(kf, rows, cols);
      require(int(rep_act[a].size()) == rows, errc::validation_error,
              "matrix for arrow '" + ws.q->arrows[a].name + "' has wrong row count");
      r.act.push_back(rep_act[a]);
    }
    ws.rep = std::move(r);
  }
  if (!unf_e.empty()) {
    Unfolding u;
    u.base = wq_to_matrix(*ws.q);
    u.e = unf_e;
    u.C = unf_rows;
    require(int(u.C.size()) == u.total(), errc::validation_error,
            "unfolding matrix has wrong row count");
    for (const auto& row : u.C)
      require(int(row.size()) == u.total(), errc::validation_error,
              "unfolding matrix has a wrong-length row");
    ws.unfolding = std::move(u);
  }
  return ws;
}

inline std::string print_potential(const WeightedQuiver& q, const FieldTower& tw,
                                   const AlgebraElement& S) {
  std::ostringstream os;
  for (const auto& [p, cf] : S.terms)
    os << detail::format_kelem(tw, cf) << " " << detail::format_term(q, p) << "\n";
  return os.str();
}

inline std::string print_workspace(const Workspace& ws) {
  std::ostringstream os;
  const FieldTower& tw = *ws.tw;
  os << "[field] p=" << tw.p << " d=" << tw.d << " c=" << tw.c;
  if (tw.base_m > 1) os << " m=" << tw.base_m;
  os << "\n[quiver] weights=";
  for (int i = 0; i < ws.q->n(); ++i) os << (i ? "," : "") << ws.q->weights[i];
  os << "\n";
  for (const Arrow& a : ws.q->arrows)
    os << "arrow " << a.name << " " << a.tail << " " << a.head << "\n";
  if (ws.S && !ws.S->is_zero()) {
    os << "[potential]\n" << print_potential(*ws.q, tw, *ws.S);
  }
  if (ws.rep) {
    os << "[rep]\nmdims ";
    for (int i = 0; i < ws.q->n(); ++i) os << (i ? "," : "") << ws.rep->mdim[i];
    os << "\nvdims ";
    for (int i = 0; i < ws.q->n(); ++i) os << (i ? "," : "") << ws.rep->vdim[i];
    os << "\n";
    for (size_t a = 0; a < ws.q->arrows.size(); ++a) {
      os << "matrix " << ws.q->arrows[a].name << "\n";
      for (const auto& row : ws.rep->act[a]) {
        for (size_t j = 0; j < row.size(); ++j)
          os << (j ? " " : "") << detail::format_kelem(tw, row[j]);
        os << "\n";
      }
    }
  }
  if (ws.unfolding) {
    os << "[unfolding]\ne ";
    for (size_t i = 0; i < ws.unfolding->e.size(); ++i)
      os << (i ? "," : "") << ws.unfolding->e[i];
    os << "\n";
    for (const auto& row : ws.unfolding->C) {
      os << "row ";
      for (size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << row[j];
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace spf
