// SPDX-License-Identifier: Apache-2.0
//
// priorccs: prior-aware 2D convolutional compressive sensing for mmWave beam alignment
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#ifndef PRIORCCS_IO_HPP
#define PRIORCCS_IO_HPP

#include "bench.hpp"
#include "channel.hpp"
#include "learner.hpp"

#include <json.hpp> // vendored nlohmann/json

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

// Text formats. Every file starts with '#'-prefixed header lines.
// Grid dump: N rows of 2N comma-separated numbers, re and im interleaved.

namespace priorccs
{
using HeaderLines = std::vector<std::pair<std::string, std::string>>;

inline void write_header(std::ostream &os, const HeaderLines &header)
{
    for (const auto &[k, v] : header)
        os << "# " << k << '=' << v << '\n';
}

inline void write_grid(std::ostream &os, const ComplexGrid &g, const HeaderLines &header = {})
{
    write_header(os, header);
    char buf[64];
    for (std::size_t r = 0; r < g.rows(); ++r)
    {
        for (std::size_t c = 0; c < g.cols(); ++c)
        {
            std::snprintf(buf, sizeof buf, "%s%.17g,%.17g", c ? "," : "", g(r, c).real(), g(r, c).imag());
            os << buf;
        }
        os << '\n';
    }
}

/// Inverse of write_grid; header lines are skipped.
inline ComplexGrid read_grid(std::istream &is)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line))
    {
        ++lineno;
        if (line.empty() || line.front() == '#')
            continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
        {
            try
            {
                std::size_t used = 0;
                vals.push_back(std::stod(cell, &used));
                if (used != cell.size())
                    throw std::invalid_argument(cell);
            }
            catch (const std::exception &)
            {
                throw std::invalid_argument("read_grid: line " + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
        }
        if (vals.size() % 2 != 0)
            throw std::invalid_argument("read_grid: line " + std::to_string(lineno) + ": odd value count");
        rows.push_back(std::move(vals));
    }
    if (rows.empty())
        throw std::invalid_argument("read_grid: no data rows");
    const std::size_t cols = rows.front().size() / 2;
    ComplexGrid g(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
    {
        if (rows[r].size() != 2 * cols)
            throw std::invalid_argument("read_grid: ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            g(r, c) = {rows[r][2 * c], rows[r][2 * c + 1]};
    }
    return g;
}

/// One CSV line per realization: strongest direction and channel powers.
inline void write_ensemble_csv(std::ostream &os, std::span<const ChannelRealization> ens, std::size_t first_index,
                               const HeaderLines &header = {})
{
    write_header(os, header);
    os << "index,best,best_row,best_col,peak_power,channel_power,sigma2\n";
    char buf[128];
    for (std::size_t i = 0; i < ens.size(); ++i)
    {
        const auto &r = ens[i];
        const auto [row, col] = from_flat(r.true_best, r.x.side());
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g", std::norm(r.x[r.true_best.value]), r.h.frobenius_norm_sq(),
                      r.sigma2);
        os << first_index + i << ',' << r.true_best.value << ',' << row << ',' << col << ',' << buf << '\n';
    }
}

inline nlohmann::json to_json(const TrajectoryPoint &p)
{
    return nlohmann::json{{"t", p.t},
                          {"M", p.m},
                          {"s", p.s.value},
                          {"true_best", p.true_best.value},
                          {"hellinger", p.hellinger},
                          {"bf_loss_db", p.bf_loss_db},
                          {"prior_entropy", p.prior_entropy}};
}

/// Header as one JSON object line, then one object per step.
inline void write_trajectory_jsonl(std::ostream &os, std::span<const TrajectoryPoint> traj, const HeaderLines &header)
{
    nlohmann::json h = nlohmann::json::object();
    for (const auto &[k, v] : header)
        h[k] = v;
    os << nlohmann::json{{"config", h}}.dump() << '\n';
    for (const auto &p : traj)
        os << to_json(p).dump() << '\n';
}

/// Loads a records CSV written by write_records_csv ('#' lines skipped).
inline std::vector<TrialRecord> read_records_csv(std::istream &is)
{
    std::vector<TrialRecord> out;
    std::string line;
    std::size_t lineno = 0;
    bool seen_columns = false;
    while (std::getline(is, line))
    {
        ++lineno;
        if (line.empty() || line.front() == '#')
            continue;
        if (!seen_columns)
        {
            seen_columns = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (cells.size() != 7)
            throw std::invalid_argument("records: line " + std::to_string(lineno) + ": expected 7 columns");
        try
        {
            out.push_back(TrialRecord{std::stoull(cells[0]), method_from_string(cells[1]), std::stoull(cells[2]),
                                      FlatIndex{std::stoull(cells[3])}, std::stod(cells[4]), std::stod(cells[5]),
                                      std::stod(cells[6])});
        }
        catch (const std::exception &e)
        {
            throw std::invalid_argument("records: line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

} // namespace priorccs

#endif
