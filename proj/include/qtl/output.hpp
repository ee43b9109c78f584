// output.hpp - run-directory files: ledger.csv, entropy.csv, meta.json
#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qtl/frameworks.hpp"
#include "qtl/observables.hpp"

namespace qtl {

inline constexpr const char* kLedgerHeader = "t,framework,U,W_flux,Q_flux,W_cum,Q_cum,detF,singular";
inline constexpr const char* kEntropyHeader = "t,S_S,S_E,I_SE,dS_S,Sigma_A,Sigma_B,Sigma_C,Sigma_D";

/// Shortest decimal that round-trips to the same double; "nan" and "inf" spelled out.
std::string format_double(double x);

/// Per-sample map diagnostics shared by every ledger row at that sample.
struct MapColumn {
    std::vector<double> det_f;
    std::vector<unsigned char> singular;
};

/// One row per (sample, framework), samples outermost, frameworks in A..D order.
void write_ledger_csv(std::ostream& out, std::span<const EnergyLedger> ledgers, const MapColumn& map);
void write_entropy_csv(std::ostream& out, const EntropyRecord& rec);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Writes text to path atomically enough for our purposes (temp file + rename).
void write_file(const std::filesystem::path& path, const std::string& text);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Minimal reader for the files above (no quoting). Throws Error on ragged rows.
CsvTable read_csv(const std::filesystem::path& path);

} // namespace qtl
