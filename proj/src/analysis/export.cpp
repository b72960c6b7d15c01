#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "kzoom/analysis.hpp"
#include "kzoom/detail/format.hpp"
#include "kzoom/error.hpp"

namespace kzoom::analysis {

using kzoom::detail::fmt_double;

void write_csv(std::ostream& out, const HistogramResult& r) {
  out << "bin,x_lo,x_hi,mean,stddev\n";
  for (std::size_t b = 0; b < r.mean.size(); ++b) {
    out << b << ',' << fmt_double(r.edges[b]) << ',' << fmt_double(r.edges[b + 1]) << ',' << fmt_double(r.mean[b])
        << ',' << fmt_double(r.stddev[b]) << '\n';
  }
}

void write_csv(std::ostream& out, const BifurcationGrid& g) {
  // Long format; empty cells are omitted, degenerate columns get one marker row.
  out << "mu,bin,x_lo,x_hi,count,degenerate\n";
  for (std::size_t col = 0; col < g.mu.size(); ++col) {
    if (g.degenerate[col]) {
      out << g.mu[col] << ",,,,0,1\n";
      continue;
    }
    const auto& column = g.density[col];
    for (std::size_t b = 0; b < column.size(); ++b) {
      if (column[b] == 0) continue;
      out << g.mu[col] << ',' << b << ',' << fmt_double(g.x_edges[b]) << ',' << fmt_double(g.x_edges[b + 1]) << ','
          << column[b] << ",0\n";
    }
  }
}

void write_csv(std::ostream& out, const ReturnMapData& r) {
  if (r.dims == 3) {
    out << "t,z_t,z_t1,z_t2\n";
    for (std::size_t i = 0; i < r.triples.size(); ++i) {
      const auto& p = r.triples[i];
      out << i << ',' << fmt_double(p[0]) << ',' << fmt_double(p[1]) << ',' << fmt_double(p[2]) << '\n';
    }
    return;
  }
  out << "t,z_t,z_t1\n";
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    out << i << ',' << fmt_double(r.pairs[i][0]) << ',' << fmt_double(r.pairs[i][1]) << '\n';
  }
}

void write_csv(std::ostream& out, const KacReport& r) {
  out << "site,predicted_measure,predicted_mean_return,empirical_mean_return,relative_error,returns\n"
      << r.site << ',' << fmt_double(r.predicted_measure) << ',' << fmt_double(r.predicted_mean_return) << ','
      << fmt_double(r.empirical_mean_return) << ',' << fmt_double(r.relative_error) << ',' << r.returns << '\n';
}

void write_csv(std::ostream& out, std::span<const CipherDistResult> results) {
  // record = hist: index is the log bin, value the mean count per run.
  // record = total: index is the run, value its total iterations (empty if excluded).
  out << "label,record,index,lo,hi,value\n";
  for (const auto& r : results) {
    for (std::size_t b = 0; b < r.mean_histogram.size(); ++b) {
      out << r.label << ",hist," << b << ',' << fmt_double(r.bin_edges[b]) << ',' << fmt_double(r.bin_edges[b + 1])
          << ',' << fmt_double(r.mean_histogram[b]) << '\n';
    }
    for (std::size_t i = 0; i < r.totals.size(); ++i) {
      out << r.label << ",total," << i << ",,,";
      if (r.totals[i]) out << *r.totals[i];
      out << '\n';
    }
  }
}

void write_csv(std::ostream& out, const BatterySweepResult& r) {
  auto reports = r.flat();
  write_battery_csv(out, reports);
}

void write_pgm(std::ostream& out, const BifurcationGrid& g) {
  const std::size_t width = g.mu.size();
  const std::size_t height = g.x_edges.empty() ? 0 : g.x_edges.size() - 1;
  std::uint64_t peak = 0;
  for (const auto& column : g.density) {
    for (auto v : column) peak = std::max(peak, v);
  }
  out << "P5\n" << width << ' ' << height << "\n255\n";
  const double norm = peak > 0 ? std::log1p(static_cast<double>(peak)) : 1.0;
  for (std::size_t row = 0; row < height; ++row) {
    const std::size_t bin = height - 1 - row;
    for (std::size_t col = 0; col < width; ++col) {
      double level = std::log1p(static_cast<double>(g.density[col][bin])) / norm;
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * level))));
    }
  }
}

template <class Result>
std::uint64_t export_csv(const Result& result, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  write_csv(file, result);
  const auto bytes = static_cast<std::uint64_t>(file.tellp());
  file.close();
  if (!file) throw Error(ErrorCode::io, "failed writing '" + path + "'");
  return bytes;
}

template std::uint64_t export_csv(const HistogramResult&, const std::string&);
template std::uint64_t export_csv(const BifurcationGrid&, const std::string&);
template std::uint64_t export_csv(const ReturnMapData&, const std::string&);
template std::uint64_t export_csv(const KacReport&, const std::string&);
template std::uint64_t export_csv(const std::vector<CipherDistResult>&, const std::string&);
template std::uint64_t export_csv(const BatterySweepResult&, const std::string&);

}  // namespace kzoom::analysis
