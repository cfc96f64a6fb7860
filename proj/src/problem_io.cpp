#include "fedsim/problem_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "fedsim/textio.hpp"

namespace fedsim {

namespace {

constexpr const char* kMagic = "fedsim-problem";
constexpr const char* kVersion = "v1";

void write_vector(std::ostream& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << format_double(v[i]);
  }
  out << '\n';
}

void write_matrix_rows(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) fail("unexpected end of file");
    return w;
  }

  void expect(const std::string& keyword) {
    const std::string w = word();
    if (w != keyword)
      fail("expected '" + keyword + "' but found '" + w + "'");
  }

  bool try_keyword(const std::string& keyword) {
    std::streampos mark = in_.tellg();
    std::string w;
    if (!(in_ >> w)) {
      in_.clear();
      in_.seekg(mark);
      return false;
    }
    if (w == keyword) return true;
    in_.clear();
    in_.seekg(mark);
    return false;
  }

  double number() {
    const std::string w = word();
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(w, &used);
    } catch (const std::exception&) {
      fail("expected a number, found '" + w + "'");
    }
    if (used != w.size()) fail("expected a number, found '" + w + "'");
    return value;
  }

  long integer() {
    const double v = number();
    const long n = static_cast<long>(v);
    if (static_cast<double>(n) != v) fail("expected an integer");
    return n;
  }

  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("malformed problem file: " + why);
  }

 private:
  std::istream& in_;
};

}  // namespace

void save_problem(const FederatedProblem& problem,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + path.string());
  out << kMagic << ' ' << kVersion << '\n';
  out << "dim " << problem.dim() << '\n';
  out << "clients " << problem.num_clients() << '\n';
  for (int c = 0; c < problem.num_clients(); ++c) {
    const ClientObjective& cl = problem.client(c);
    out << "client " << c << '\n';
    out << "weight " << format_double(cl.weight()) << '\n';
    out << "reference_point\n";
    write_vector(out, cl.reference_point());
    out << "shift\n";
    write_vector(out, cl.shift());
    out << "curvature\n";
    write_matrix_rows(out, cl.curvature());
    if (cl.has_samples()) {
      out << "samples " << cl.sample_inputs().rows() << '\n';
      write_matrix_rows(out, cl.sample_inputs());
      out << "labels\n";
      write_vector(out, cl.sample_labels());
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

FederatedProblem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open problem file: " + path.string());
  TokenReader r(in);
  r.expect(kMagic);
  r.expect(kVersion);
  r.expect("dim");
  const long d = r.integer();
  if (d < 1) r.fail("dim must be >= 1");
  r.expect("clients");
  const long m = r.integer();
  if (m < 1) r.fail("clients must be >= 1");

  std::vector<ClientObjective> clients;
  clients.reserve(m);
  for (long c = 0; c < m; ++c) {
    r.expect("client");
    const long idx = r.integer();
    if (idx != c) r.fail("client blocks out of order");
    r.expect("weight");
    const double weight = r.number();
    r.expect("reference_point");
    Vector ref(d);
    for (long i = 0; i < d; ++i) ref[i] = r.number();
    r.expect("shift");
    Vector shift(d);
    for (long i = 0; i < d; ++i) shift[i] = r.number();
    r.expect("curvature");
    Matrix curv(d, d);
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < d; ++j) curv(i, j) = r.number();
    ClientObjective obj(std::move(curv), std::move(shift), std::move(ref),
                        weight);
    if (r.try_keyword("samples")) {
      const long n = r.integer();
      if (n < 1) r.fail("sample count must be >= 1");
      Matrix inputs(n, d);
      for (long i = 0; i < n; ++i)
        for (long j = 0; j < d; ++j) inputs(i, j) = r.number();
      r.expect("labels");
      Vector labels(n);
      for (long i = 0; i < n; ++i) labels[i] = r.number();
      obj.attach_samples(std::move(inputs), std::move(labels));
    }
    clients.push_back(std::move(obj));
  }
  return FederatedProblem(std::move(clients));
}

}  // namespace fedsim
