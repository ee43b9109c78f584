// output.cpp - CSV formatting and checksums
#include "qtl/output.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace qtl {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

void write_ledger_csv(std::ostream& out, std::span<const EnergyLedger> ledgers, const MapColumn& map) {
    std::vector<const EnergyLedger*> order;
    for (const auto& l : ledgers) order.push_back(&l);
    std::sort(order.begin(), order.end(),
              [](const EnergyLedger* a, const EnergyLedger* b) { return a->framework < b->framework; });
    const std::size_t n = order.empty() ? 0 : order.front()->size();
    for (const auto* l : order)
        if (l->size() != n) throw DimensionError("write_ledger_csv: ledgers differ in length");
    if (map.det_f.size() != n || map.singular.size() != n)
        throw DimensionError("write_ledger_csv: map column length differs from ledgers");

    out << kLedgerHeader << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        const std::string det = format_double(map.det_f[i]);
        const char sing = map.singular[i] ? '1' : '0';
        for (const auto* l : order) {
            out << format_double(l->t[i]) << ',' << framework_letter(l->framework) << ',' << format_double(l->u[i])
                << ',' << format_double(l->w_flux[i]) << ',' << format_double(l->q_flux[i]) << ','
                << format_double(l->w_cum[i]) << ',' << format_double(l->q_cum[i]) << ',' << det << ',' << sing
                << '\n';
        }
    }
}

void write_entropy_csv(std::ostream& out, const EntropyRecord& rec) {
    out << kEntropyHeader << '\n';
    for (std::size_t i = 0; i < rec.t.size(); ++i) {
        out << format_double(rec.t[i]) << ',' << format_double(rec.s_s[i]) << ',' << format_double(rec.s_e[i]) << ','
            << format_double(rec.i_se[i]) << ',' << format_double(rec.ds_s[i]);
        for (const auto& sigma : rec.sigma) out << ',' << format_double(sigma[i]);
        out << '\n';
    }
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("sha256_file: cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256_file: digest init failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        const auto got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got)) != 1)
            throw Error("sha256_file: digest update failed");
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) throw Error("sha256_file: digest final failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[md[i] >> 4];
        hex += kHex[md[i] & 15];
    }
    return hex;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out << text;
        if (!out) throw Error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("read_csv: cannot read " + path.string());
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        return cells;
    };
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) return table;
    table.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != table.header.size())
            throw Error("read_csv: ragged row in " + path.string());
        table.rows.push_back(std::move(cells));
    }
    return table;
}

} // namespace qtl
