#pragma once

// Structured-document serialization: families and ellipsoids as JSON with
// "p/q" strings for exact values, series dumps, trajectory tables.

#include <json.hpp>

#include <string>

#include "poncelet/billiard.hpp"
#include "poncelet/cayley.hpp"
#include "poncelet/confocal.hpp"

namespace poncelet::io {

using nlohmann::json;

json family_to_json(const confocal::ConfocalFamily& f);
confocal::ConfocalFamily family_from_json(const json& j);

json minkowski_to_json(const confocal::MinkowskiEllipsoid& e);
confocal::MinkowskiEllipsoid minkowski_from_json(const json& j);

json boundary_to_json(const confocal::BoundaryQuadric& q);
confocal::BoundaryQuadric boundary_from_json(const json& j);

json verdict_to_json(const cayley::PeriodicityVerdict& v);

// one "p/q" per line, index-ordered
std::string series_dump(const cayley::RationalSeries& s);

// delimited text, one row per bounce; header row names the columns
std::string trajectory_table(const billiard::Trajectory& t);

json trajectory_summary(const billiard::Trajectory& t);

}  // namespace poncelet::io
