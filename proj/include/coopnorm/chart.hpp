#pragma once

#include <string>

#include "coopnorm/records.hpp"

namespace coopnorm {

struct ChartOptions {
    std::string title;
    int width = 720;
    int height = 480;
};

/**
 * Standalone SVG 1.1 line chart of column `y` against column `x`.
 *
 * Rows are split by the values of the comma-separated columns in `group`
 * (empty for a single series), in order of first appearance. A group with two or more points
 * becomes one polyline; a group with a single point becomes a circle marker.
 * Rows whose x or y cell is not numeric are skipped. The output depends only on
 * the inputs, byte for byte.
 *
 * Throws EmptyResultError when there is nothing to plot and UsageError when a
 * named column does not exist.
 */
std::string render_svg(const Table& records, const std::string& x, const std::string& y, const std::string& group,
                       const ChartOptions& options = {});

}  // namespace coopnorm
