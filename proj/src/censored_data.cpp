#include "cekm/censored_data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cekm/errors.hpp"
#include "cekm/format.hpp"

namespace cekm {

CensoredSample generate_censored(const Distribution& f, const Distribution& g, std::size_t n,
                                 RandomStream& rng) {
  if (n < 1) throw DomainError("generate_censored: n must be >= 1");
  RandomStream x_stream = rng.split(1);
  RandomStream y_stream = rng.split(2);
  CensoredSample out;
  out.z.resize(n);
  out.delta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = f.quantile(x_stream.uniform());
    const double y = g.quantile(y_stream.uniform());
    out.z[i] = std::min(x, y);
    out.delta[i] = x <= y ? 1 : 0;
  }
  return out;
}

SortedCensoredSample sort_with_concomitants(const CensoredSample& sample) {
  if (sample.size() == 0) throw DomainError("sort_with_concomitants: empty sample");
  if (sample.z.size() != sample.delta.size()) {
    throw DomainError("sort_with_concomitants: z and delta lengths differ");
  }
  const std::size_t n = sample.size();
  SortedCensoredSample out;
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  // Ties: censored before uncensored, original order within equal (z, delta).
  std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
    if (sample.z[a] != sample.z[b]) return sample.z[a] < sample.z[b];
    return sample.delta[a] < sample.delta[b];
  });
  out.z.resize(n);
  out.delta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.z[i] = sample.z[out.order[i]];
    out.delta[i] = sample.delta[out.order[i]];
  }
  return out;
}

TailView top_k_view(const SortedCensoredSample& sorted, std::size_t k) {
  const std::size_t n = sorted.size();
  if (k < 1 || k >= n) throw std::out_of_range("top_k_view: k must satisfy 1 <= k <= n-1");
  const double threshold = sorted.z[n - k - 1];
  if (!(threshold > 0.0)) {
    throw DomainError("top_k_view: threshold order statistic must be positive");
  }
  TailView view;
  view.k = k;
  view.n = n;
  view.threshold = threshold;
  view.ratios.resize(k);
  view.delta_top.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    view.ratios[i] = sorted.z[n - 1 - i] / threshold;
    view.delta_top[i] = sorted.delta[n - 1 - i];
  }
  return view;
}

double uncensored_fraction(const TailView& view) {
  if (view.k == 0) throw DomainError("uncensored_fraction: empty view");
  double sum = 0.0;
  for (auto d : view.delta_top) sum += d;
  return sum / static_cast<double>(view.k);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

double parse_time_field(const std::string& field, std::size_t line_no) {
  const std::string t = trimmed(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": nonnumeric time '" + t + "'");
  }
  if (!(value > 0.0)) {
    throw ParseError("line " + std::to_string(line_no) + ": time must be positive, got '" + t + "'");
  }
  return value;
}

std::uint8_t parse_status_field(const std::string& field, std::size_t line_no) {
  const std::string t = trimmed(field);
  if (t == "0") return 0;
  if (t == "1") return 1;
  throw ParseError("line " + std::to_string(line_no) + ": status must be 0 or 1, got '" + t + "'");
}

}  // namespace

CensoredSample read_survival_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  // Header: locate time/status columns, extra columns are ignored.
  std::size_t time_col = std::string::npos, status_col = std::string::npos;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto header = split_csv_line(line);
    for (std::size_t i = 0; i < header.size(); ++i) {
      const std::string name = trimmed(header[i]);
      if (name == "time") time_col = i;
      if (name == "status") status_col = i;
    }
    if (time_col == std::string::npos || status_col == std::string::npos) {
      throw ParseError("header must contain 'time' and 'status' columns");
    }
    break;
  }
  if (time_col == std::string::npos) throw ParseError("empty file: '" + path.string() + "'");

  CensoredSample out;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() <= std::max(time_col, status_col)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected at least " +
                       std::to_string(std::max(time_col, status_col) + 1) + " columns");
    }
    out.z.push_back(parse_time_field(fields[time_col], line_no));
    out.delta.push_back(parse_status_field(fields[status_col], line_no));
  }
  if (out.z.empty()) throw ParseError("no data rows in '" + path.string() + "'");
  return out;
}

void write_survival_csv(const std::filesystem::path& path, const CensoredSample& sample) {
  std::ofstream outf(path);
  if (!outf) throw ParseError("cannot write '" + path.string() + "'");
  outf << "time,status\n";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    outf << format_double(sample.z[i]) << ',' << int(sample.delta[i]) << '\n';
  }
}

}  // namespace cekm
