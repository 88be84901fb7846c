#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>

#include "adnd/csv_io.hpp"
#include "adnd/model.hpp"

// Text dump, one section per line group:
//
//   ADND1
//   hyper <eta> <gamma> <tau>
//   trunc <k_h> <k_a> <k_b>
//   vocab <W>
//   <label>            (W lines)
//   lambda_bar <rows> <cols>
//   <row values>       (rows lines)
//   beta_bar_h <K>
//   <values>
//   diagnostics <sweeps> <converged> <trace length>
//   <trace values>
//   end
//
// Doubles use shortest round-trip formatting, so reload is bit-exact.

namespace adnd {
namespace {

constexpr const char* kMagic = "ADND1";

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) fail("unexpected end of model file");
    ++line_no_;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
  }

  // Reads "<keyword> <n...>" and returns the trailing integers.
  std::vector<long long> header(const std::string& keyword, std::size_t count) {
    const std::string s = line();
    auto fields = split_ws(s);
    if (fields.empty() || fields[0] != keyword || fields.size() != count + 1) {
      fail("expected '" + keyword + "' section");
    }
    std::vector<long long> out;
    for (std::size_t i = 1; i < fields.size(); ++i) out.push_back(parse_int(fields[i]));
    return out;
  }

  // A line of `expected` doubles, optionally preceded by a keyword.
  std::vector<double> doubles(std::size_t expected, const std::string& keyword = {}) {
    const std::string s = line();
    auto fields = split_ws(s);
    if (!keyword.empty()) {
      if (fields.empty() || fields[0] != keyword) fail("expected '" + keyword + "' section");
      fields.erase(fields.begin());
    }
    if (fields.size() != expected) fail("wrong number of values");
    std::vector<double> out;
    out.reserve(expected);
    for (const auto& f : fields) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) fail("bad number '" + f + "'");
      out.push_back(v);
    }
    return out;
  }

  long long parse_int(const std::string& f) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || ptr != f.data() + f.size()) fail("bad integer '" + f + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("model file line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  static std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && s[i] == ' ') ++i;
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ') ++j;
      if (j > i) out.emplace_back(s.substr(i, j - i));
      i = j;
    }
    return out;
  }

  std::istream& in_;
  std::size_t line_no_ = 0;
};

void write_row(std::ostream& out, const double* values, Eigen::Index n, Eigen::Index stride) {
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j) out << ' ';
    out << format_double(values[j * stride]);
  }
  out << '\n';
}

}  // namespace

void save_model(std::ostream& out, const FittedModel& model) {
  out << kMagic << '\n';
  out << "hyper " << format_double(model.hyper.eta) << ' ' << format_double(model.hyper.gamma)
      << ' ' << format_double(model.hyper.tau) << '\n';
  out << "trunc " << model.trunc.k_h << ' ' << model.trunc.k_a << ' ' << model.trunc.k_b << '\n';
  const auto& labels = model.vocab->labels();
  out << "vocab " << labels.size() << '\n';
  for (const auto& label : labels) out << label << '\n';
  const auto& lb = model.lambda_bar;
  out << "lambda_bar " << lb.rows() << ' ' << lb.cols() << '\n';
  for (Eigen::Index i = 0; i < lb.rows(); ++i) write_row(out, &lb(i, 0), lb.cols(), lb.rows());
  out << "beta_bar_h " << model.beta_bar_h.size() << '\n';
  write_row(out, model.beta_bar_h.data(), model.beta_bar_h.size(), 1);
  const auto& d = model.diagnostics;
  out << "diagnostics " << d.sweeps << ' ' << (d.converged ? 1 : 0) << ' ' << d.elbo_trace.size()
      << '\n';
  write_row(out, d.elbo_trace.data(), static_cast<Eigen::Index>(d.elbo_trace.size()), 1);
  out << "end\n";
  if (!out) throw std::runtime_error("save_model: write failed");
}

FittedModel load_model(std::istream& in) {
  Reader r(in);
  if (r.line() != kMagic) r.fail("missing ADND1 header");

  FittedModel m;
  {
    auto v = r.doubles(3, "hyper");
    m.hyper = {v[0], v[1], v[2]};
  }
  {
    auto t = r.header("trunc", 3);
    m.trunc = {static_cast<int>(t[0]), static_cast<int>(t[1]), static_cast<int>(t[2])};
  }
  m.hyper.validate();
  m.trunc.validate();

  const auto w = r.header("vocab", 1)[0];
  if (w < 0) r.fail("negative vocabulary size");
  auto vocab = std::make_shared<NodeVocab>();
  for (long long i = 0; i < w; ++i) vocab->intern(r.line());
  if (static_cast<long long>(vocab->size()) != w) r.fail("duplicate vocabulary labels");
  m.vocab = vocab;

  const auto dims = r.header("lambda_bar", 2);
  if (dims[0] != m.trunc.k_h || dims[1] != w + 1) r.fail("lambda_bar shape mismatch");
  m.lambda_bar.resize(dims[0], dims[1]);
  for (Eigen::Index i = 0; i < dims[0]; ++i) {
    auto row = r.doubles(static_cast<std::size_t>(dims[1]));
    for (Eigen::Index j = 0; j < dims[1]; ++j) m.lambda_bar(i, j) = row[j];
  }
  const auto k = r.header("beta_bar_h", 1)[0];
  if (k != m.trunc.k_h) r.fail("beta_bar_h length mismatch");
  auto beta = r.doubles(static_cast<std::size_t>(k));
  m.beta_bar_h = Eigen::Map<Eigen::VectorXd>(beta.data(), k);

  const auto diag = r.header("diagnostics", 3);
  m.diagnostics.sweeps = static_cast<int>(diag[0]);
  m.diagnostics.converged = diag[1] != 0;
  m.diagnostics.elbo_trace = r.doubles(static_cast<std::size_t>(diag[2]));
  if (r.line() != "end") r.fail("missing 'end' marker");
  return m;
}

}  // namespace adnd
