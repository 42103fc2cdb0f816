#ifndef RDLAB_IO_HPP
#define RDLAB_IO_HPP

// CSV tables with shortest round-trip floats, little-endian state dumps
// (uint32 N, uint32 M, float64 L, uint64 count, then count * M^N float64 values),
// and small file helpers.

#include "rdlab/domain.hpp"
#include "rdlab/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace rdlab {

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

class CsvTable {
public:
    using Cell = std::variant<double, long long, std::string>;

    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<Cell> row) {
        if (row.size() != header_.size())
            throw ParameterError("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                                 std::to_string(header_.size()));
        rows_.push_back(std::move(row));
    }

    std::size_t rows() const { return rows_.size(); }

    std::string str() const {
        std::string out;
        append_line(out, header_);
        for (const auto& r : rows_) {
            std::vector<std::string> cells;
            for (const auto& c : r)
                cells.push_back(render(c));
            append_line(out, cells);
        }
        return out;
    }

    void write(const std::filesystem::path& path) const;

private:
    static std::string render(const Cell& c) {
        if (const double* d = std::get_if<double>(&c))
            return format_double(*d);
        if (const long long* i = std::get_if<long long>(&c))
            return std::to_string(*i);
        return std::get<std::string>(c);
    }

    static void append_line(std::string& out, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

/// Writes bytes exactly (binary mode, so no newline translation).
inline void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw StateError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw StateError("write to " + path.string() + " failed");
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw StateError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void CsvTable::write(const std::filesystem::path& path) const { write_file(path, str()); }

// ---------------------------------------------------------------------------
// Binary state dumps

namespace detail {

template <class T>
void put_le(std::string& out, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(b.begin(), b.end());
    out.append(b.data(), b.size());
}

template <class T>
T get_le(const std::string& in, std::size_t& pos) {
    if (pos + sizeof(T) > in.size())
        throw StateError("truncated state dump");
    std::array<char, sizeof(T)> b;
    std::memcpy(b.data(), in.data() + pos, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(b.begin(), b.end());
    pos += sizeof(T);
    T v;
    std::memcpy(&v, b.data(), sizeof(T));
    return v;
}

} // namespace detail

inline std::string encode_states(const DomainSpec& d, const std::vector<Field>& states) {
    std::string out;
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(d.dimension));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(d.points_per_axis));
    detail::put_le<double>(out, d.side_length);
    detail::put_le<std::uint64_t>(out, states.size());
    for (const auto& s : states) {
        if (!(s.domain() == d))
            throw StateError("state dump mixes domains");
        for (double v : s.values())
            detail::put_le<double>(out, v);
    }
    return out;
}

/// Decodes a dump; the eigenvalue convention is not stored and is taken from `convention`.
inline std::vector<Field> decode_states(const std::string& bytes,
                                        EigenvalueConvention convention = EigenvalueConvention::continuum) {
    std::size_t pos = 0;
    DomainSpec d;
    d.dimension = static_cast<int>(detail::get_le<std::uint32_t>(bytes, pos));
    d.points_per_axis = static_cast<int>(detail::get_le<std::uint32_t>(bytes, pos));
    d.side_length = detail::get_le<double>(bytes, pos);
    d.eigenvalues = convention;
    d.validate();
    const auto count = detail::get_le<std::uint64_t>(bytes, pos);
    if ((bytes.size() - pos) != count * d.size() * sizeof(double))
        throw StateError("state dump length does not match its header");
    std::vector<Field> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::vector<double> v(d.size());
        for (double& x : v)
            x = detail::get_le<double>(bytes, pos);
        out.emplace_back(d, std::move(v));
    }
    return out;
}

inline void write_states(const std::filesystem::path& path, const DomainSpec& d, const std::vector<Field>& states) {
    write_file(path, encode_states(d, states));
}

inline std::vector<Field> read_states(const std::filesystem::path& path,
                                      EigenvalueConvention convention = EigenvalueConvention::continuum) {
    return decode_states(read_file(path), convention);
}

} // namespace rdlab

#endif
