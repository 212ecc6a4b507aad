#pragma once

#include <filesystem>
#include <string>

#include "mccm/model.hpp"
#include "mccm/recovery.hpp"
#include "mccm/tables.hpp"

namespace mccm {

/** Canonical float formatting: 17 significant digits, round-trip exact. */
std::string format_double(double value);

/** Canonical one-line JSON encoding {"n":..., "lambda":[...], "rho":[[...]]}. */
std::string model_to_json(const ModelParams& model);

/**
 * Parses a model document. With renormalize = true, lambda and every rho row
 * are rescaled to sum to one first (rows summing to ~0 are left alone for
 * validation to flag). Shape problems throw IoError; semantic validation is
 * the caller's business.
 */
ModelParams model_from_json(const std::string& text, bool renormalize = false);

void save_model(const std::filesystem::path& path, const ModelParams& model);
ModelParams load_model(const std::filesystem::path& path, bool renormalize = false);

/**
 * Choice tables are newline-delimited JSON records sorted by (size, lex):
 *   {"S":[1,3],"pi":{"0":...,"1":...,"3":...}}
 */
void save_choice_table(const std::filesystem::path& path, const ChoiceTable& table);
ChoiceTable load_choice_table(const std::filesystem::path& path, int n);

std::string report_to_json(const RecoveryReport& report);
void save_report(const std::filesystem::path& path, const RecoveryReport& report);

/** FNV-1a hash of the canonical model encoding, as fixed-width hex. */
std::string model_hash_hex(const ModelParams& model);

}  // namespace mccm
