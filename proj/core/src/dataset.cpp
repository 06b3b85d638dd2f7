#include "floodsift/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

#include "floodsift/error.hpp"
#include "floodsift/random.hpp"

namespace floodsift {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            return cells;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::optional<double> parse_real(std::string_view text) {
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

// ---------------------------------------------------------------- Dataset

void Dataset::add(FlowRecord record) {
    if (record.values.size() != schema_.size())
        throw DataError("load", "record has " + std::to_string(record.values.size()) + " cells, schema has " +
                                    std::to_string(schema_.size()));
    for (std::size_t i = 0; i < schema_.size(); ++i) {
        const auto& cell = record.values[i];
        if (schema_[i].kind == FeatureKind::Continuous) {
            const auto* v = std::get_if<double>(&cell);
            if (v == nullptr) throw DataError("load", "column " + schema_[i].name + " expects a real value");
            if (!std::isfinite(*v)) throw DataError("load", "non-finite value in column " + schema_[i].name);
        } else if (!std::holds_alternative<std::string>(cell)) {
            throw DataError("load", "column " + schema_[i].name + " expects a category string");
        }
    }
    records_.push_back(std::move(record));
}

// ---------------------------------------------------------------- CSV

Dataset read_csv(std::istream& in, const FeatureSchema& schema, const LoadOptions& options) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("", "input is empty; expected a header row");

    const auto header = split_commas(line);
    // column_of[header position] = schema index, or npos for the class column.
    constexpr auto kClassSlot = static_cast<std::size_t>(-1);
    std::vector<std::size_t> column_of(header.size());
    std::vector<bool> seen(schema.size(), false);
    std::optional<std::size_t> class_position;

    for (std::size_t h = 0; h < header.size(); ++h) {
        const std::string name(header[h]);
        if (is_class_column_name(name)) {
            if (class_position) throw SchemaError(name, "duplicate class column " + name);
            class_position = h;
            column_of[h] = kClassSlot;
            continue;
        }
        const auto idx = schema.index_of(name);
        if (!idx) throw SchemaError(name, "unexpected column " + name);
        if (seen[*idx]) throw SchemaError(name, "duplicate column " + name);
        seen[*idx] = true;
        column_of[h] = *idx;
    }
    for (std::size_t i = 0; i < schema.size(); ++i)
        if (!seen[i]) throw SchemaError(schema[i].name, "missing column " + schema[i].name);
    if (options.require_label && !class_position)
        throw SchemaError("PKT_CLASS", "missing class column (PKT_CLASS, class or label)");

    Dataset ds(schema);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto cells = split_commas(line);
        if (cells.size() != header.size())
            throw ParseError(row, "", "row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                                          " cells, found " + std::to_string(cells.size()));

        FlowRecord record;
        record.values.resize(schema.size());
        for (std::size_t h = 0; h < cells.size(); ++h) {
            if (column_of[h] == kClassSlot) {
                const auto label = parse_class_label(cells[h]);
                if (!label)
                    throw LabelError("load", "row " + std::to_string(row) + ": unknown class '" +
                                                 std::string(cells[h]) + "'");
                record.label = *label;
                continue;
            }
            const auto& feature = schema[column_of[h]];
            if (feature.kind == FeatureKind::Continuous) {
                const auto value = parse_real(cells[h]);
                if (!value)
                    throw ParseError(row, feature.name,
                                     "row " + std::to_string(row) + ", column " + feature.name +
                                         ": cannot parse '" + std::string(cells[h]) + "' as a finite real");
                record.values[column_of[h]] = *value;
            } else {
                record.values[column_of[h]] = std::string(cells[h]);
            }
        }
        ds.add(std::move(record));
    }
    return ds;
}

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("load", "cannot open " + path.string());
    return read_csv(in, schema, options);
}

void write_csv(std::ostream& out, const Dataset& ds) {
    const auto& schema = ds.schema();
    const bool labelled =
        !ds.empty() && std::all_of(ds.records().begin(), ds.records().end(), [](const auto& r) { return r.label; });
    for (std::size_t i = 0; i < schema.size(); ++i) out << (i ? "," : "") << schema[i].name;
    if (labelled || ds.empty()) out << ",PKT_CLASS";
    out << '\n';

    for (const auto& record : ds.records()) {
        for (std::size_t i = 0; i < record.values.size(); ++i) {
            if (i) out << ',';
            std::visit(
                [&](const auto& v) {
                    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>)
                        out << format_real(v);
                    else
                        out << v;
                },
                record.values[i]);
        }
        if (labelled) out << ',' << class_name(*record.label);
        out << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw DataError("write", "cannot open " + path.string() + " for writing");
    write_csv(out, ds);
    if (!out) throw DataError("write", "failed writing " + path.string());
}

// ---------------------------------------------------------------- duplicates

std::size_t check_duplicates(const Dataset& ds) {
    std::set<FlowRecord> seen;
    std::size_t duplicates = 0;
    for (const auto& record : ds.records())
        if (!seen.insert(record).second) ++duplicates;
    return duplicates;
}

// ---------------------------------------------------------------- encoder

LabelEncoder::LabelEncoder(const FeatureSchema& schema, std::map<std::size_t, std::vector<std::string>> categories)
    : categories_(std::move(categories)), fitted_(true) {
    column_names_.reserve(schema.size());
    for (const auto& f : schema.features()) column_names_.push_back(f.name);
    for (auto& [column, cats] : categories_) {
        if (column >= schema.size() || schema[column].kind != FeatureKind::Symbolic)
            throw DataError("encode", "encoder column " + std::to_string(column) + " is not symbolic");
        std::sort(cats.begin(), cats.end());
        cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
    }
}

int LabelEncoder::encode(std::size_t column, const std::string& category) const {
    const auto it = categories_.find(column);
    const std::string name = column < column_names_.size() ? column_names_[column] : std::to_string(column);
    if (it == categories_.end()) throw EncodingError(name, category);
    const auto pos = std::lower_bound(it->second.begin(), it->second.end(), category);
    if (pos == it->second.end() || *pos != category) throw EncodingError(name, category);
    return static_cast<int>(pos - it->second.begin());
}

const std::string& LabelEncoder::decode(std::size_t column, int code) const {
    const auto& cats = categories_.at(column);
    if (code < 0 || static_cast<std::size_t>(code) >= cats.size())
        throw DataError("encode", "category code " + std::to_string(code) + " out of range");
    return cats[static_cast<std::size_t>(code)];
}

LabelEncoder fit_encoder(const Dataset& ds) {
    if (ds.empty()) throw DataError("encode", "cannot fit an encoder on an empty dataset");
    std::map<std::size_t, std::vector<std::string>> categories;
    for (auto column : ds.schema().symbolic_columns()) {
        std::set<std::string> distinct;
        for (const auto& record : ds.records()) distinct.insert(std::get<std::string>(record.values[column]));
        categories[column] = {distinct.begin(), distinct.end()};
    }
    return LabelEncoder(ds.schema(), std::move(categories));
}

EncodedData encode(const Dataset& ds, const LabelEncoder& encoder) {
    if (!encoder.fitted()) throw DataError("encode", "label encoder is not fitted");
    const auto& schema = ds.schema();
    EncodedData out{Matrix(ds.size(), schema.size()), {}};

    const bool labelled = std::all_of(ds.records().begin(), ds.records().end(), [](const auto& r) { return r.label; });
    if (labelled) out.y.reserve(ds.size());

    for (std::size_t r = 0; r < ds.size(); ++r) {
        const auto& record = ds.records()[r];
        for (std::size_t c = 0; c < schema.size(); ++c) {
            if (const auto* v = std::get_if<double>(&record.values[c]))
                out.X(r, c) = *v;
            else
                out.X(r, c) = encoder.encode(c, std::get<std::string>(record.values[c]));
        }
        if (labelled) out.y.push_back(code_of(*record.label));
    }
    return out;
}

// ---------------------------------------------------------------- distribution

ClassDistribution class_distribution(const LabelVector& y) {
    ClassDistribution d;
    for (int code : y) {
        if (code < 0 || code >= kNumClasses)
            throw LabelError("label", "class code out of range: " + std::to_string(code));
        ++d.counts[static_cast<std::size_t>(code)];
    }
    d.total = y.size();
    if (d.total > 0)
        for (std::size_t k = 0; k < d.counts.size(); ++k)
            d.fractions[k] = static_cast<double>(d.counts[k]) / static_cast<double>(d.total);
    return d;
}

std::array<double, kNumClasses> reference_class_proportions() {
    const double total =
        static_cast<double>(std::accumulate(kReferenceClassCounts.begin(), kReferenceClassCounts.end(), 0ULL));
    std::array<double, kNumClasses> p{};
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = static_cast<double>(kReferenceClassCounts[k]) / total;
    return p;
}

// ---------------------------------------------------------------- synthetic

namespace {

// Offsets that put each continuous column in a plausible raw range.
constexpr std::array<double, kNumFeatures> kBaseOffset{
    3.0,      24.0,     150000.0, 3.0,   24.0,  1.0,   1000.0, 0.0,   4.0,
    40000.0,  20000.0,  2.0e7,    0.0,   0.0,   500.0, 480.0,  15.0,  0.0,
    300.0,    3.0e5,    1000.0,   0.5,   0.0,   50.0,  50.0,   1.0,   50.0};

const std::array<std::array<std::vector<std::string>, 3>, kNumClasses>& symbolic_pools() {
    // Pools for FLAGS, NODE_NAME_FROM, NODE_NAME_TO, per class.
    static const std::array<std::array<std::vector<std::string>, 3>, kNumClasses> pools{{
        {{{"-------", "---A---"}, {"Switch1", "Router", "server1"}, {"Router", "Switch2", "clien-1"}}},
        {{{"-------"}, {"clien-3", "clien-7", "clien-14"}, {"switch1", "Router"}}},
        {{{"-------", "---A---"}, {"clien-6", "clien-9"}, {"Switch1"}}},
        {{{"---A---", "-----P-"}, {"clien-2", "clien-11"}, {"Router", "server1"}}},
        {{{"-----P-", "---A---"}, {"clien-5", "clien-12"}, {"server1"}}},
    }};
    return pools;
}

}  // namespace

std::array<std::size_t, kNumClasses> synthetic_class_counts(std::size_t n,
                                                            const std::array<double, kNumClasses>& proportions) {
    double sum = 0.0;
    for (double p : proportions) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw DataError("synth", "class proportions must be finite and >= 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DataError("synth", "class proportions must sum to 1");

    std::array<std::size_t, kNumClasses> counts{};
    std::size_t attacks = 0;
    for (std::size_t k = 1; k < counts.size(); ++k) {
        counts[k] = static_cast<std::size_t>(std::round(static_cast<double>(n) * proportions[k]));
        attacks += counts[k];
    }
    if (attacks > n) throw DataError("synth", "rounded attack-class counts exceed n");
    counts[0] = n - attacks;
    return counts;
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n < 5) throw DataError("synth", "synthetic corpus needs n >= 5");
    if (!(spec.separation > 0.0) || !std::isfinite(spec.separation))
        throw DataError("synth", "separation must be a positive real");
    const auto counts = synthetic_class_counts(spec.n, spec.proportions);

    const auto& schema = FeatureSchema::standard();
    std::vector<std::size_t> continuous;
    for (std::size_t i = 0; i < schema.size(); ++i)
        if (schema[i].kind == FeatureKind::Continuous) continuous.push_back(i);

    // Class c owns the continuous columns whose position t satisfies t % K == c.
    // Its mean is displaced by a / sqrt(owned) on each owned column, a = s / sqrt(2),
    // so every pair of class means lies exactly `separation` apart.
    std::array<std::size_t, kNumClasses> owned{};
    for (std::size_t t = 0; t < continuous.size(); ++t) ++owned[t % kNumClasses];
    const double shift = spec.separation / std::sqrt(2.0);

    const auto symbolic = schema.symbolic_columns();
    const auto& pools = symbolic_pools();

    Rng rng(spec.seed);
    std::vector<FlowRecord> records;
    records.reserve(spec.n);
    for (std::size_t c = 0; c < counts.size(); ++c) {
        for (std::size_t i = 0; i < counts[c]; ++i) {
            FlowRecord rec;
            rec.values.resize(schema.size());
            rec.label = static_cast<ClassLabel>(c);
            for (std::size_t t = 0; t < continuous.size(); ++t) {
                double mean = kBaseOffset[continuous[t]];
                if (t % kNumClasses == c) mean += shift / std::sqrt(static_cast<double>(owned[c]));
                rec.values[continuous[t]] = mean + rng.normal();
            }
            for (std::size_t s = 0; s < symbolic.size(); ++s) {
                const auto& pool = pools[c][s];
                rec.values[symbolic[s]] = pool[rng.uniform_index(pool.size())];
            }
            records.push_back(std::move(rec));
        }
    }
    rng.shuffle(std::span(records));

    Dataset ds(schema);
    for (auto& r : records) ds.add(std::move(r));
    return ds;
}

}  // namespace floodsift
