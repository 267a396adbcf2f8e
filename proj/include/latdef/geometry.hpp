#pragma once

// Finite-difference differential geometry of coframe fields: torsion of the
// teleparallelism, the Levi-Civita connection of the induced metric, and
// the compatibility and isometric-rigidity verdicts built on them.
//
// All derivatives are second-order central differences. Nodes without a
// full stencil (box edge, invalid neighbour, cut crossing) are skipped, never
// approximated one-sidedly.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "latdef/coframe.hpp"
#include "latdef/region.hpp"

namespace latdef {

struct TorsionField {
  GridGeometry grid;
  std::vector<std::uint8_t> evaluated;
  std::vector<double> tau1;  // d theta^1 (dx ^ dy component)
  std::vector<double> tau2;  // d theta^2
  double max_norm = 0.0;     // max |tau^a| over evaluated nodes
  std::size_t count = 0;

  // Same summary restricted to nodes inside `window` (closed, with slack).
  double max_in(const Rect& window) const;
};

// Throws NumericalError if no node has a full stencil.
TorsionField torsion(const CoframeField& field);

// Largest central-difference derivative |d_j theta^a_k| over stencil nodes.
double derivative_scale(const CoframeField& field);

struct CompatibilityReport {
  bool compatible = false;
  double max_torsion = 0.0;
  double derivative_scale = 0.0;
  double tol = 0.0;
  double threshold = 0.0;  // tol * derivative_scale
};

// Default tolerance when none is given: 10 h^2.
double default_compatibility_tol(const CoframeField& field);

CompatibilityReport is_compatible(const CoframeField& field, std::optional<double> tol = std::nullopt);

// Coefficients Gamma^i_{jk} (i: result index, j: derivative direction,
// k: slot) stored at i*4 + j*2 + k.
struct Connection {
  GridGeometry grid;
  std::vector<std::uint8_t> evaluated;
  std::vector<std::array<double, 8>> coefficients;

  static constexpr std::size_t slot(int i, int j, int k) {
    return static_cast<std::size_t>(i * 4 + j * 2 + k);
  }
  double operator()(std::size_t idx, int i, int j, int k) const { return coefficients[idx][slot(i, j, k)]; }
  double max_abs() const;
};

// Gamma^i_{jk} = (theta^-1)^i_a d_j theta^a_k.
Connection teleparallel_connection(const CoframeField& field);
// Christoffel symbols of g = theta^T theta from differences of g.
Connection riemann_cartan_connection(const CoframeField& field);

struct ConnectionComparison {
  bool coincide = false;
  double max_gap = 0.0;
  double scale = 0.0;  // largest coefficient magnitude over common nodes
  double tol = 0.0;
  double threshold = 0.0;
};

// Componentwise comparison over nodes evaluated in both; tol defaults to
// 10 h^2 and is relative to the coefficient scale. Throws InputError when
// the grids differ.
ConnectionComparison connections_coincide(const Connection& c1, const Connection& c2,
                                          std::optional<double> tol = std::nullopt,
                                          std::optional<Rect> window = std::nullopt);

// max |R^i_{k xy}| of a connection, R_{xy} = d_x A_y - d_y A_x + [A_x, A_y]
// with (A_j)^i_k = Gamma^i_{jk}. Nodes need evaluated stencil neighbours.
double curvature_residual(const Connection& c);

// max |theta^T theta - I| over valid nodes.
double metric_deviation(const CoframeField& field);
bool is_isometric(const CoframeField& field, double tol);

struct RigidityReport {
  bool isometric = false;
  bool compatible = false;
  bool constant = false;
  bool torsion_detected = false;
  double max_torsion = 0.0;
  double max_deviation_from_mean = 0.0;
  // isometric && compatible  =>  constant
  bool implication_holds = false;
};

RigidityReport isometric_rigidity_check(const CoframeField& field, double tol);

struct ConvergenceLevel {
  double h = 0.0;
  double max_torsion = 0.0;
  double max_gap = 0.0;
  std::size_t evaluated = 0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceLevel> levels;
  std::vector<double> torsion_ratios;  // previous / current
  std::vector<double> gap_ratios;
};

// Samples the field at h0, h0/2, ... (`levels` grids) and records the torsion
// and teleparallel/Levi-Civita gap maxima, optionally inside a fixed window.
ConvergenceStudy convergence_study(const std::function<CoframeField(double)>& make_field, double h0,
                                   int levels, std::optional<Rect> window = std::nullopt);

}  // namespace latdef
