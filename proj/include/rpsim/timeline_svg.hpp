#pragma once

#include "rpsim/scheduler.hpp"

#include <iosfwd>
#include <string>

namespace rpsim {

/*
 * Utilization timeline: time on the horizontal axis, one row per data tile
 * on the vertical axis. Each delayed operation draws a line from the point
 * where a resource was requested to the point where it became available:
 * horizontal on the waiting tile's row for magic-state waits, sloped between
 * the origin and destination rows for cross-segment teleports. Projections
 * onto the time axis equal the recorded delays. Output is byte-stable for a
 * fixed schedule.
 */
void render_timeline(const Schedule& schedule, std::ostream& out);
std::string render_timeline(const Schedule& schedule);
void render_timeline_file(const Schedule& schedule, const std::string& path);

} // namespace rpsim
