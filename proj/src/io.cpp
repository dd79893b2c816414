#include "submatch/io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "submatch/error.hpp"

namespace submatch {
namespace {

constexpr std::array<char, 5> kMagic = {'S', 'U', 'B', 'M', '1'};
constexpr std::uint64_t kMaxN = 1u << 20;

static_assert(std::endian::native == std::endian::little, "binary format assumes little-endian");

void check_cost(double x) {
  if (!std::isfinite(x) || x < 0) fail(ErrorCode::Format, "cost entries must be finite and >= 0");
}

}  // namespace

CostMatrixData read_cost_matrix(std::istream& in) {
  CostMatrixData out;
  std::array<char, 5> head{};
  in.read(head.data(), head.size());
  if (in.gcount() == 5 && head == kMagic) {
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in || n == 0 || n > kMaxN) fail(ErrorCode::Format, "bad binary header");
    out.n = n;
    out.costs.resize(n * n);
    in.read(reinterpret_cast<char*>(out.costs.data()),
            static_cast<std::streamsize>(out.costs.size() * sizeof(double)));
    if (!in) fail(ErrorCode::Format, "truncated binary cost matrix");
    for (double x : out.costs) check_cost(x);
    return out;
  }
  in.clear();
  in.seekg(0);
  long long n = 0;
  if (!(in >> n) || n <= 0 || static_cast<std::uint64_t>(n) > kMaxN)
    fail(ErrorCode::Format, "expected a positive size on the first line");
  out.n = static_cast<std::size_t>(n);
  out.costs.resize(out.n * out.n);
  for (double& x : out.costs) {
    if (!(in >> x)) fail(ErrorCode::Format, "expected n*n cost entries");
    check_cost(x);
  }
  std::string extra;
  if (in >> extra) fail(ErrorCode::Format, "trailing data after cost matrix");
  return out;
}

CostMatrixData read_cost_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  return read_cost_matrix(in);
}

void write_cost_matrix_text(std::ostream& out, const CostFunction& fn) {
  std::size_t n = fn.size();
  out << n << '\n';
  char buf[32];
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      std::snprintf(buf, sizeof buf, "%.17g", fn.at(u, v));
      if (v) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

void write_cost_matrix_binary(std::ostream& out, const CostFunction& fn) {
  std::uint64_t n = fn.size();
  out.write(kMagic.data(), kMagic.size());
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  std::vector<double> row(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) row[v] = fn.at(u, v);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(n * sizeof(double)));
  }
}

void write_cost_matrix(const std::string& path, const CostFunction& fn, bool binary) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
  if (binary)
    write_cost_matrix_binary(out, fn);
  else
    write_cost_matrix_text(out, fn);
  if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

BipartiteInstance load_instance(const std::string& path) {
  CostMatrixData data = read_cost_matrix(path);
  return make_dense_instance(data.n, std::move(data.costs));
}

}  // namespace submatch
