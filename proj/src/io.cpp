#include "qot/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "qot/errors.hpp"

namespace qot {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

bool to_double(std::string_view s, double& v) {
  const std::string t = trim(s);
  std::string_view u = t;
  if (!u.empty() && u.front() == '+') u.remove_prefix(1);
  if (u.empty()) return false;
  auto res = std::from_chars(u.data(), u.data() + u.size(), v);
  return res.ec == std::errc() && res.ptr == u.data() + u.size() && std::isfinite(v);
}

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  fail(ErrorCode::Parse, where + ": " + what);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Marginal parse_marginal(const std::string& text) {
  const std::string t = trim(text);
  if (lower(t.substr(0, 9)) == "discrete:") return read_discrete_csv(trim(t.substr(9)));

  const auto open = t.find('(');
  if (open == std::string::npos) parse_fail("marginal '" + t + "' column 1", "expected NAME(args)");
  if (t.back() != ')') parse_fail("marginal '" + t + "' column " + std::to_string(t.size()), "expected ')'");
  const std::string name = lower(trim(t.substr(0, open)));

  std::vector<double> args;
  std::size_t col = open + 1;
  for (const auto& piece : split(t.substr(open + 1, t.size() - open - 2), ',')) {
    double v = 0.0;
    if (!to_double(piece, v))
      parse_fail("marginal '" + t + "' column " + std::to_string(col + 1), "bad number '" + trim(piece) + "'");
    args.push_back(v);
    col += piece.size() + 1;
  }
  auto want = [&](std::size_t k) {
    if (args.size() != k)
      parse_fail("marginal '" + t + "'", name + " takes " + std::to_string(k) + " argument(s)");
  };
  if (name == "u" || name == "uniform") {
    want(2);
    return Marginal::uniform(args[0], args[1]);
  }
  if (name == "n" || name == "normal") {
    want(2);
    return Marginal::normal(args[0], args[1]);
  }
  if (name == "exp" || name == "exponential") {
    want(1);
    return Marginal::exponential(args[0]);
  }
  if (name == "bern" || name == "bernoulli") {
    want(1);
    return Marginal::bernoulli(args[0]);
  }
  parse_fail("marginal '" + t + "' column 1", "unknown family '" + name + "'");
}

Marginal read_discrete_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  return parse_discrete_csv(in, path);
}

Marginal parse_discrete_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<double> pts, ws;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (!header) {
      const auto cols = split(t, ',');
      if (cols.size() != 2 || trim(cols[0]) != "point" || trim(cols[1]) != "prob")
        parse_fail(where + ":1", "expected header 'point,prob'");
      header = true;
      continue;
    }
    const auto cols = split(t, ',');
    if (cols.size() != 2) parse_fail(where + ":1", "expected two columns");
    double p = 0.0, w = 0.0;
    if (!to_double(cols[0], p)) parse_fail(where + ":1", "bad point '" + trim(cols[0]) + "'");
    if (!to_double(cols[1], w)) parse_fail(where + ":" + std::to_string(cols[0].size() + 2), "bad prob '" + trim(cols[1]) + "'");
    if (w < 0.0) parse_fail(where + ":" + std::to_string(cols[0].size() + 2), "negative prob");
    if (!pts.empty() && !(p > pts.back())) parse_fail(where + ":1", "points must be strictly increasing");
    pts.push_back(p);
    ws.push_back(w);
  }
  if (!header) parse_fail(source + ":1", "missing header 'point,prob'");
  if (pts.empty()) parse_fail(source, "no rows");
  double total = 0.0;
  for (double w : ws) total += w;
  if (std::abs(total - 1.0) > 1e-9) parse_fail(source, "probabilities sum to " + format_double(total));
  for (auto& w : ws) w /= total;
  return Marginal::discrete(std::move(pts), std::move(ws));
}

std::size_t parse_count(const std::string& text) {
  double v = 0.0;
  if (!to_double(text, v) || v < 0.0 || v != std::floor(v) || v > 1e15)
    fail(ErrorCode::Parse, "bad count '" + text + "'");
  return static_cast<std::size_t>(v);
}

void write_header(std::ostream& out, const HeaderLines& header) {
  for (const auto& [k, v] : header) out << "# " << k << '=' << v << '\n';
}

void write_plan_csv(std::ostream& out, const TransportPlan& plan, const HeaderLines& header) {
  write_header(out, header);
  out << "x,y,mass\n";
  for (std::size_t i = 0; i < plan.rows(); ++i)
    for (std::size_t j = 0; j < plan.cols(); ++j)
      if (plan(i, j) > 0.0)
        out << format_double(plan.xs()[i]) << ',' << format_double(plan.ys()[j]) << ',' << format_double(plan(i, j))
            << '\n';
}

void write_samples_csv(std::ostream& out, const std::vector<std::pair<double, double>>& xy,
                       const HeaderLines& header) {
  write_header(out, header);
  out << "x,y\n";
  for (const auto& [x, y] : xy) out << format_double(x) << ',' << format_double(y) << '\n';
}

TransportPlan read_plan_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::map<std::pair<double, double>, double> cells;
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header) {
      if (t != "x,y,mass") parse_fail("plan:" + std::to_string(lineno), "expected header 'x,y,mass'");
      header = true;
      continue;
    }
    const auto cols = split(t, ',');
    double x = 0.0, y = 0.0, m = 0.0;
    if (cols.size() != 3 || !to_double(cols[0], x) || !to_double(cols[1], y) || !to_double(cols[2], m))
      parse_fail("plan:" + std::to_string(lineno), "expected three numbers");
    cells[{x, y}] += m;
    xs.push_back(x);
    ys.push_back(y);
  }
  if (!header) parse_fail("plan", "missing header");
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<double> mass(xs.size() * ys.size(), 0.0);
  for (const auto& [key, m] : cells) {
    const auto i = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), key.first) - xs.begin());
    const auto j = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), key.second) - ys.begin());
    mass[i * ys.size() + j] = m;
  }
  return TransportPlan(std::move(xs), std::move(ys), std::move(mass));
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      fail(ErrorCode::Io, "write to '" + tmp + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    fail(ErrorCode::Io, "cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

}  // namespace qot
