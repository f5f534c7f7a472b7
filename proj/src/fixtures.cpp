#include "opinion/fixtures.hpp"

#include <cstdint>
#include <cstdio>

namespace opinion::fixtures {
namespace {

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Index>(r.size()), static_cast<Index>(r.begin()->size()));
  Index i = 0;
  for (const auto& row : r) {
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Vector values(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

netcore::SystemSpec sec5_system(const Vector& lambda, const Matrix& d, std::optional<Matrix> c) {
  auto l = netcore::stochastic_to_laplacian(netcore::StochasticMatrix(sec5_stochastic()), {1.0});
  std::optional<netcore::MiDSMatrix> mids;
  if (c) mids.emplace(*c);
  return netcore::SystemSpec(netcore::SusceptibilityMatrix(lambda), std::move(l), netcore::AppraisalMatrix(d),
                             std::move(mids));
}

netcore::SystemSpec example1_system(const Vector& lambda) {
  return netcore::SystemSpec(netcore::SusceptibilityMatrix(lambda),
                             netcore::InteractingLaplacian(example1_laplacian()),
                             netcore::AppraisalMatrix(example1_appraisal()));
}

std::vector<Fixture> build() {
  std::vector<Fixture> out;
  out.push_back({"example1", "3 agents, antagonistic appraisal, Lambda = diag(-0.05, 0.5, 0.5)",
                 example1_system(values({-0.05, 0.5, 0.5})), example1_x0()});
  out.push_back({"example1-half", "3 agents, antagonistic appraisal, Lambda = 0.5 I",
                 example1_system(values({0.5, 0.5, 0.5})), example1_x0()});
  out.push_back({"sec5-coop", "4 agents, cooperative D1, Lambda1, C1",
                 sec5_system(sec5_lambda1(), sec5_d1(), sec5_c1()), sec5_x0()});
  out.push_back({"sec5-coop-stable", "4 agents, cooperative D1, Lambda1, C1* = 0.85 C1",
                 sec5_system(sec5_lambda1(), sec5_d1(), Matrix(0.85 * sec5_c1())), sec5_x0()});
  out.push_back({"sec5-coop-issue-free", "4 agents, cooperative D1, Lambda1, first issue only",
                 sec5_system(sec5_lambda1(), sec5_d1(), std::nullopt), sec5_x0_issue(0)});
  out.push_back({"sec5-antag", "4 agents, antagonistic D2, Lambda2, C2",
                 sec5_system(sec5_lambda2(), sec5_d2(), sec5_c2()), sec5_x0()});
  out.push_back({"sec5-antag-stable", "4 agents, antagonistic D2, Lambda2, C2* = 0.95 C2",
                 sec5_system(sec5_lambda2(), sec5_d2(), Matrix(0.95 * sec5_c2())), sec5_x0()});
  out.push_back({"sec5-antag-issue-free", "4 agents, antagonistic D2, Lambda2, first issue only",
                 sec5_system(sec5_lambda2(), sec5_d2(), std::nullopt), sec5_x0_issue(0)});
  return out;
}

void mix(std::uint64_t& h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
}

void mix(std::uint64_t& h, const Matrix& m) {
  char buf[40];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,", m(i, j));
      mix(h, buf);
    }
    mix(h, ";");
  }
}

}  // namespace

const std::vector<Fixture>& catalog() {
  static const std::vector<Fixture> cat = build();
  return cat;
}

const Fixture& get(const std::string& name) {
  for (const auto& f : catalog()) {
    if (f.name == name) return f;
  }
  std::string known;
  for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError("unknown fixture '" + name + "' (known: " + known + ")");
}

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& f : catalog()) out.push_back(f.name);
  return out;
}

Matrix sec5_stochastic() {
  return rows({{0.22, 0.12, 0.36, 0.3},
               {0.147, 0.215, 0.344, 0.294},
               {0, 0, 1, 0},
               {0.09, 0.178, 0.446, 0.286}});
}

Matrix sec5_d1() {
  return rows({{0.2, 0.2, 0.3, 0.3}, {0.1, 0.5, 0, 0.4}, {0.1, 0.4, 0, 0.5}, {0.4, 0.3, 0.2, 0.1}});
}

Matrix sec5_d2() {
  return rows({{0.2, -0.2, -0.3, -0.3}, {0.1, 0.5, 0, 0.4}, {-0.1, 0.4, 0, 0.5}, {0.4, 0.3, -0.2, 0.1}});
}

Vector sec5_lambda1() { return values({-1, 1, 1, -1}); }
Vector sec5_lambda2() { return values({-1.5, 2, 1, -0.5}); }
Matrix sec5_c1() { return rows({{0.9, 0.1}, {0.1, 0.9}}); }
Matrix sec5_c2() { return rows({{0.6, 0.4}, {0.3, 0.7}}); }
Vector sec5_x0() { return values({25, 25, 25, 15, 75, -50, 85, 5}); }

Vector sec5_x0_issue(Index p) {
  const Vector all = sec5_x0();
  Vector out(4);
  for (Index i = 0; i < 4; ++i) out(i) = all(2 * i + p);
  return out;
}

Matrix example1_laplacian() { return rows({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}); }
Matrix example1_appraisal() { return rows({{0.5, -0.5, 0}, {0, 0.5, -0.5}, {-0.5, 0, 0.5}}); }
Vector example1_x0() { return values({25, 75, 85}); }

std::uint64_t catalog_checksum() {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const auto& f : catalog()) {
    mix(h, f.name);
    mix(h, Matrix(f.system.lambda().diag()));
    mix(h, f.system.laplacian().matrix());
    mix(h, f.system.appraisal().matrix());
    if (f.system.mids()) mix(h, f.system.mids()->matrix());
    mix(h, Matrix(f.x0));
  }
  return h;
}

}  // namespace opinion::fixtures
