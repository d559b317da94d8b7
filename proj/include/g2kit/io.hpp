#pragma once

// JSON and CSV serialization. JSON round-trips exactly: doubles are printed
// with 17 significant digits and NaN travels as null.

#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "g2kit/audit.hpp"
#include "g2kit/coflow.hpp"
#include "g2kit/g2core.hpp"
#include "g2kit/numberlat.hpp"
#include "g2kit/sweep.hpp"

namespace g2kit {

using json = nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);

void to_json(json& j, const QuarticPoly& p);
void from_json(const json& j, QuarticPoly& p);
void to_json(json& j, const UnitSpec& u);
void from_json(const json& j, UnitSpec& u);
void to_json(json& j, const LatticeChecks& c);
void from_json(const json& j, LatticeChecks& c);
void to_json(json& j, const LatticeCertificate& c);
void from_json(const json& j, LatticeCertificate& c);

void to_json(json& j, const CoclosedParams& p);
void from_json(const json& j, CoclosedParams& p);
void to_json(json& j, const SolitonSolution& s);
void from_json(const json& j, SolitonSolution& s);
void to_json(json& j, const SolitonFit& f);
void from_json(const json& j, SolitonFit& f);
void to_json(json& j, const FlowSample& s);
void from_json(const json& j, FlowSample& s);

void to_json(json& j, const TorsionReport& r);
void from_json(const json& j, TorsionReport& r);

void to_json(json& j, const AuditEntry& e);
void from_json(const json& j, AuditEntry& e);
void to_json(json& j, const AuditReport& r);
void from_json(const json& j, AuditReport& r);

/// Header t,a1,a2,b1,b2,c1,c2,N,F,r,s,tc; 17 significant digits.
void write_trajectory_csv(std::ostream& os, const FlowTrajectory& traj);
void write_flow_sweep_csv(std::ostream& os, std::span<const FlowSweepRow> rows);

}  // namespace g2kit
