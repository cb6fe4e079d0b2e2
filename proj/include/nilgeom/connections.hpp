#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nilgeom/complexgeom.hpp"

namespace nilgeom::connections {

using coeffield::Coefficient;
using complexgeom::SU3Model;
using exterior::CoframePtr;
using exterior::Form;
using exterior::JAction;
using liealg::StructureEquations;

enum class ConnectionKind { levi_civita, chern, bismut, custom };

// Matrix of connection 1-forms sigma[i][j] = sigma^{i+1}_{j+1} over a real
// orthonormal coframe, with sigma^j_i = -sigma^i_j for the metric connections
// produced here.
struct Connection {
  CoframePtr coframe;
  ConnectionKind kind = ConnectionKind::custom;
  std::array<std::array<Form, 6>, 6> sigma;
  // For the Chern connection: the torsion 1-forms C^i_j it was built from.
  std::optional<std::array<std::array<Form, 6>, 6>> torsion_one_forms;

  // "sigma i j = <form>" lines, upper triangle only
  std::string str() const;
};

struct CurvatureMatrix {
  CoframePtr coframe;
  std::array<std::array<Form, 6>, 6> omega;

  // "Omega i j = <form>" lines, upper triangle only
  std::string str() const;
};

struct RelationReport {
  bool pass = false;
  std::vector<std::string> failed;
  std::string str() const;
};

// Levi-Civita connection 1-forms of the metric making the coframe orthonormal:
// (sigma^g)^i_j(e_k) = (a^i_{jk} - a^k_{ij} + a^j_{ki}) / 2.
Connection levi_civita(const StructureEquations& s);

// Chern connection sigma^c = sigma^g - C/2 with C^i_j(e_k) = dF(J e_k, e_i, e_j).
Connection chern(const SU3Model& m);

// Bismut connection sigma^+ = sigma^g with T/2 added slot-wise:
// (sigma^+)^i_j(e_k) = (sigma^g)^i_j(e_k) + T(e_k, e_j, e_i) / 2.
Connection bismut(const SU3Model& m);

// Omega^i_j = d sigma^i_j + sum_k sigma^i_k ^ sigma^k_j
CurvatureMatrix curvature(const Connection& c, const StructureEquations& s);

// The seven relations making a skew connection an su(3) one in an adapted
// coframe: sigma^1_3 = sigma^2_4, sigma^1_4 = -sigma^2_3, sigma^1_5 =
// sigma^2_6, sigma^1_6 = -sigma^2_5, sigma^3_5 = sigma^4_6, sigma^3_6 =
// -sigma^4_5, sigma^1_2 + sigma^3_4 + sigma^5_6 = 0.
RelationReport su3_connection_check(const Connection& c);

// The same seven relations on the curvature matrix indices: the curvature
// endomorphisms commute with J and are complex trace-free. This is the
// necessary condition for the holonomy reduction of the source connection.
RelationReport su3_curvature_check(const CurvatureMatrix& omega);

// Instanton conditions for an adapted J: for every entry,
// Omega(e_1,e_2) + Omega(e_3,e_4) + Omega(e_5,e_6) = 0 and
// Omega(J e_k, J e_l) = Omega(e_k, e_l).
RelationReport instanton_check(const CurvatureMatrix& omega, const JAction& J);

// The family of skew connections with sigma^2_3 = sigma^2_5 = sigma^4_5 =
// sigma^5_6 / 2 = -(lambda e^1 + mu e^2 + tau e^6) and every other upper pair
// equal to lambda e^1 + mu e^2 + tau e^6.
Connection instanton_family(const CoframePtr& coframe, const Coefficient& lambda,
                            const Coefficient& mu, const Coefficient& tau);

struct PontrjaginResult {
  Form trace;  // sum_{i<j} Omega^i_j ^ Omega^i_j
  Form p1;     // trace / (8 pi2)
};

PontrjaginResult pontrjagin_trace(const CurvatureMatrix& omega);

}  // namespace nilgeom::connections
