// io.hpp — File formats.
//
// State JSON:  {"M": int, "atom_re": x, "atom_im": y, "field_re": [...], "field_im": [...]}
// CSV:         header row, '.' decimal separator, LF endings, shortest round-trip digits.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mpemba/excitation_state.hpp"
#include "mpemba/kernel.hpp"
#include "mpemba/propagate.hpp"

namespace mpemba::io {

// Round-trip decimal representation (shortest digits that round-trip, locale independent).
std::string format_double(double x);

std::string state_to_json(const ExcitationState& state);
ExcitationState state_from_json(const std::string& text);

void save_state(const std::filesystem::path& path, const ExcitationState& state);
ExcitationState load_state(const std::filesystem::path& path);

// Columns: tau,re,im
std::string kernel_csv(const KernelData& kernel);
// Columns: t,re,im
std::string forcing_csv(const ForcingData& forcing);
// Columns: t,re,im,D
std::string volterra_csv(const VolterraSolution& solution);

std::string read_text(const std::filesystem::path& path);
// Throws std::runtime_error when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& content);

} // namespace mpemba::io
