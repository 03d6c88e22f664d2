#pragma once

#include <string>

#include "phosphene/crossval.hpp"
#include "phosphene/serialize.hpp"

namespace phosphene {

Json to_json(const EvalReport& report);
// Aligned columns, one row per fold plus an "Average" row, "mean +/- sd"
// cells with three decimals.
std::string format_table(const EvalReport& report);

Json to_json(const SweepReport& report);
// Long format: subject_id,m,train_mse,train_se,validation_mse,validation_se.
std::string format_sweep_csv(const SweepReport& report);
std::string format_sweep_table(const SweepReport& report);

}  // namespace phosphene
