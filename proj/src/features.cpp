#include "xmembed/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>

#include "io_util.hpp"

namespace xmembed {

FeatureStore::FeatureStore(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw InvalidInputError("feature dimension must be at least 1");
}

void FeatureStore::insert(std::string id, std::vector<double> values) {
  if (id.empty()) throw InvalidInputError("image id must be nonempty");
  if (std::any_of(id.begin(), id.end(), [](unsigned char c) { return std::isspace(c); }))
    throw InvalidInputError("image id must not contain whitespace: \"" + id + "\"");
  if (values.size() != dim_)
    throw InvalidInputError("feature vector for \"" + id + "\" has dimension " +
                            std::to_string(values.size()) + ", expected " + std::to_string(dim_));
  for (double x : values)
    if (!std::isfinite(x))
      throw InvalidInputError("feature vector for \"" + id + "\" has a non-finite component");
  if (index_.contains(id)) throw DuplicateKeyError("duplicate image id \"" + id + "\"");

  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  values_.insert(values_.end(), values.begin(), values.end());
}

std::optional<std::size_t> FeatureStore::find(std::string_view id) const {
  if (auto it = index_.find(id); it != index_.end()) return it->second;
  return std::nullopt;
}

std::span<const double> FeatureStore::vector_of(std::string_view id) const {
  const auto index = find(id);
  if (!index) throw UnresolvedReferenceError("unknown image id \"" + std::string(id) + "\"");
  return row(*index);
}

FeatureStore load_features(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::string line;
  std::size_t line_no = 0;

  auto next_data_line = [&]() -> std::optional<std::string_view> {
    while (std::getline(in, line)) {
      ++line_no;
      const auto text = detail::strip_cr(line);
      if (!detail::is_blank_or_comment(text)) return text;
    }
    return std::nullopt;
  };

  const auto header = next_data_line();
  if (!header) throw ParseError(path.string(), line_no, "missing feature header");
  const auto header_fields = detail::split_ws(*header);
  if (header_fields.size() != 2)
    throw ParseError(path.string(), line_no, "expected header \"N D\"");
  const auto n = detail::parse_u64(header_fields[0]);
  const auto dim = detail::parse_u64(header_fields[1]);
  if (!n || !dim) throw ParseError(path.string(), line_no, "expected header \"N D\"");
  if (*dim == 0) throw ParseError(path.string(), line_no, "feature dimension must be at least 1");

  FeatureStore store(*dim);
  for (std::uint64_t i = 0; i < *n; ++i) {
    const auto row = next_data_line();
    if (!row)
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(*n) + " rows, got " + std::to_string(i));
    const auto fields = detail::split_ws(*row);
    if (fields.size() != 1 + *dim)
      throw ParseError(path.string(), line_no,
                       "row has " + std::to_string(fields.size() ? fields.size() - 1 : 0) +
                           " values, expected " + std::to_string(*dim));
    std::vector<double> values;
    values.reserve(*dim);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      const auto value = detail::parse_double(fields[j]);
      if (!value || !std::isfinite(*value))
        throw ParseError(path.string(), line_no, "invalid value \"" + std::string(fields[j]) + "\"");
      values.push_back(*value);
    }
    try {
      store.insert(std::string(fields[0]), std::move(values));
    } catch (const DuplicateKeyError& e) {
      throw DuplicateKeyError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const InvalidInputError& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
  }
  if (next_data_line())
    throw ParseError(path.string(), line_no, "trailing rows after declared count");
  return store;
}

void save_features(const FeatureStore& store, const std::filesystem::path& path) {
  std::vector<std::size_t> order(store.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return store.id(a) < store.id(b); });

  auto out = detail::open_output(path);
  out << store.size() << ' ' << store.dim() << '\n';
  for (std::size_t index : order) {
    out << store.id(index);
    for (double x : store.row(index)) out << ' ' << detail::format_double(x);
    out << '\n';
  }
  if (!out) throw ParseError(path.string(), 0, "write failed");
}

std::vector<double> histogram_extract(std::span<const std::uint8_t> rgb,
                                      std::size_t bins_per_channel) {
  if (bins_per_channel == 0) throw InvalidInputError("bins_per_channel must be at least 1");
  if (rgb.empty()) throw InvalidInputError("cannot extract features from an empty image");
  if (rgb.size() % 3 != 0)
    throw InvalidInputError("RGB pixel buffer length must be a multiple of 3");

  std::vector<double> histogram(3 * bins_per_channel, 0.0);
  const std::size_t pixels = rgb.size() / 3;
  for (std::size_t p = 0; p < pixels; ++p) {
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t bin = static_cast<std::size_t>(rgb[p * 3 + c]) * bins_per_channel / 256;
      histogram[c * bins_per_channel + bin] += 1.0;
    }
  }
  const double norm = 1.0 / static_cast<double>(pixels);
  for (double& x : histogram) x *= norm;
  return histogram;
}

namespace {

// PPM header tokens may be separated by whitespace and '#' comments.
std::string next_ppm_token(std::istream& in, const std::string& path) {
  std::string token;
  int c = in.get();
  while (c != std::char_traits<char>::eof()) {
    if (c == '#') {
      while (c != std::char_traits<char>::eof() && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != std::char_traits<char>::eof() && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (token.empty()) throw ParseError(path, 0, "unexpected end of PPM header");
  return token;
}

std::size_t next_ppm_number(std::istream& in, const std::string& path) {
  const auto token = next_ppm_token(in, path);
  const auto value = detail::parse_u64(token);
  if (!value) throw ParseError(path, 0, "invalid PPM header number \"" + token + "\"");
  return *value;
}

}  // namespace

PpmImage load_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::in | std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file for reading");

  const auto magic = next_ppm_token(in, path.string());
  if (magic != "P6" && magic != "P3")
    throw ParseError(path.string(), 0, "unsupported PPM magic \"" + magic + "\"");

  PpmImage image;
  image.width = next_ppm_number(in, path.string());
  image.height = next_ppm_number(in, path.string());
  const std::size_t maxval = next_ppm_number(in, path.string());
  if (image.width == 0 || image.height == 0)
    throw ParseError(path.string(), 0, "PPM image has zero size");
  if (maxval == 0 || maxval > 255)
    throw ParseError(path.string(), 0, "only 8-bit PPM images are supported");

  const std::size_t count = image.width * image.height * 3;
  image.rgb.resize(count);
  if (magic == "P6") {
    // A single whitespace byte separates the header from the raster.
    if (!in.read(reinterpret_cast<char*>(image.rgb.data()),
                 static_cast<std::streamsize>(count)))
      throw ParseError(path.string(), 0, "PPM pixel data truncated");
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t value = next_ppm_number(in, path.string());
      if (value > maxval) throw ParseError(path.string(), 0, "PPM sample exceeds maxval");
      image.rgb[i] = static_cast<std::uint8_t>(value);
    }
  }
  return image;
}

}  // namespace xmembed
