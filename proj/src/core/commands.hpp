#ifndef FG_COMMANDS_HPP
#define FG_COMMANDS_HPP

#include "config.hpp"
#include "table.hpp"

namespace fg {

ResultTable cmd_lune(const RunConfig& cfg);
ResultTable cmd_riemann(const RunConfig& cfg);
ResultTable cmd_corr(const RunConfig& cfg);
ResultTable cmd_plasmon(const RunConfig& cfg);

std::string render(const ResultTable& table, const std::string& format);

}  // namespace fg

#endif
