// Writes ready-to-run path/problem pairs for the worked examples into a
// directory (default: ./demos).
//
//   make_demos [DIR]

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include <json.hpp>

#include "sigcert/path.hpp"

namespace {

using namespace sigcert;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

void write_path(const fs::path& file, const SampledPath& x) {
  std::ofstream out(file);
  write_csv_path(out, x);
}

void write_problem(const fs::path& file, const ordered_json& j) {
  std::ofstream out(file);
  out << j.dump(2) << '\n';
}

// x' = sqrt(2t - t^2 - x^2), x(0) = 0, by RK4 with `sub` steps per sample
// interval; returns (t, x, x') samples.
SampledPath sphere_ode_jet(std::size_t n, std::size_t sub) {
  auto rhs = [](double t, double x) { return std::sqrt(std::max(0.0, 2 * t - t * t - x * x)); };
  std::vector<double> ts(n);
  std::vector<Point> vals(n);
  double x = 0;
  const double h = 1.0 / static_cast<double>((n - 1) * sub);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n - 1);
    ts[k] = t;
    vals[k] = {t, x, rhs(t, x)};
    if (k + 1 == n) break;
    for (std::size_t s = 0; s < sub; ++s) {
      const double tt = t + h * static_cast<double>(s);
      const double k1 = rhs(tt, x);
      const double k2 = rhs(tt + h / 2, x + h / 2 * k1);
      const double k3 = rhs(tt + h / 2, x + h / 2 * k2);
      const double k4 = rhs(tt + h, x + h * k3);
      x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
  }
  return SampledPath::make(std::move(ts), std::move(vals));
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path dir = argc > 1 ? argv[1] : "demos";
  const double pi = std::numbers::pi;

  fs::create_directories(dir / "paraboloid");
  write_path(dir / "paraboloid" / "path.csv",
             sample_path([](double t) {
               return Point{std::sin(t), t, 2 * std::sin(t) * std::sin(t) - t * t};
             }, 0.0, 1.0, 1000));
  write_path(dir / "paraboloid" / "perturbed.csv",
             sample_path([](double t) {
               return Point{std::sin(t), t, 2 * std::sin(t) * std::sin(t) - t * t + 0.1 * t};
             }, 0.0, 1.0, 1000));
  write_problem(dir / "paraboloid" / "problem.json",
                {{"polynomials", {"2*x1^2 - x2^2 - x3"}}, {"anchored", true}});

  fs::create_directories(dir / "circle");
  write_path(dir / "circle" / "path.csv",
             sample_path([](double t) { return Point{std::cos(t), std::sin(t)}; }, 0.0, 2 * pi, 2000));
  write_problem(dir / "circle" / "problem.json",
                {{"polynomials", {"x1^2 + x2^2 - 1"}}, {"anchored", true}});

  fs::create_directories(dir / "cylinder");
  write_path(dir / "cylinder" / "path.csv", sample_path([](double t) {
               return Point{std::cos(t), 0.5 * (std::sin(t) * std::cos(t) - t), std::sin(t)};
             }, 0.0, 3 * pi, 2000));
  write_problem(dir / "cylinder" / "problem.json",
                {{"polynomials", {"x1^2 + x3^2 - 1"}}, {"anchored", true}});

  fs::create_directories(dir / "sphere-ode");
  write_path(dir / "sphere-ode" / "path.csv", sphere_ode_jet(2000, 50));
  write_problem(dir / "sphere-ode" / "problem.json",
                {{"r", 1},
                 {"l", 1},
                 {"polynomials", {"(x1 - 1)^2 + x2^2 + x3^2 - 1"}},
                 {"init", {{"v", {{0.0}}}}}});

  fs::create_directories(dir / "rotation");
  write_path(dir / "rotation" / "path.csv", sample_path([](double t) {
               return Point{t, std::cos(t), -std::sin(t), -std::sin(t), -std::cos(t)};
             }, 0.0, 1.0, 2000));
  write_path(dir / "rotation" / "sign-flipped.csv", sample_path([](double t) {
               return Point{t, std::cos(t), std::sin(t), -std::sin(t), std::cos(t)};
             }, 0.0, 1.0, 2000));
  write_problem(dir / "rotation" / "problem.json",
                {{"matrixA", {{0.0, 1.0}, {-1.0, 0.0}}}, {"init", {{"p", {1.0, 0.0}}}}});

  fs::create_directories(dir / "hamiltonian");
  write_path(dir / "hamiltonian" / "path.csv", sample_path([](double t) {
               return Point{t, -t * t / 2, -t, -t, -1.0};
             }, 0.0, 1.0, 2000));
  write_path(dir / "hamiltonian" / "perturbed.csv", sample_path([](double t) {
               return Point{t, -t * t / 2, -t, -t, -1.0 + 0.05 * t};
             }, 0.0, 1.0, 2000));
  write_problem(dir / "hamiltonian" / "problem.json",
                {{"matrixA", {{1.0}}},
                 {"vectorV", {1.0}},
                 {"init", {{"x0", {0.0}}, {"p0", {0.0}}}}});

  std::cout << "wrote demos to " << dir.string() << '\n';
  return 0;
}
