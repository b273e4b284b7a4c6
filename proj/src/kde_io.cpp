#include "seaway/kde_io.hpp"

#include "seaway/geometry.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>

namespace seaway {

namespace {

using nlohmann::json;

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const char* suffix) {
  return prefix.parent_path() / (prefix.filename().string() + suffix);
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("kde header missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("kde header field '") + key + "' has the wrong type");
  }
}

}  // namespace

void save_model(const KdeModel& model, const std::filesystem::path& prefix) {
  const auto header_path = with_suffix(prefix, ".json");
  const auto payload_path = with_suffix(prefix, ".bin");
  const GeoPoint origin = unproject(model.grid.origin, model.frame);

  json header;
  header["origin_lat"] = origin.lat;
  header["origin_lon"] = origin.lon;
  header["cell_m"] = model.grid.cell;
  header["nx"] = model.grid.nx;
  header["ny"] = model.grid.ny;
  header["h_m"] = model.bw.h;
  header["n"] = model.n;
  header["max_value"] = model.max_value;
  header["byte_order"] = "little";
  header["dtype"] = "f64";
  header["frame_lat"] = model.frame.lat;
  header["frame_lon"] = model.frame.lon;
  header["origin_north_m"] = north(model.grid.origin);
  header["origin_east_m"] = east(model.grid.origin);
  header["payload"] = payload_path.filename().string();

  std::ofstream h(header_path);
  if (!h) throw IoError("cannot write " + header_path.string());
  h << header.dump(2) << '\n';
  if (!h) throw IoError("failed writing " + header_path.string());

  std::ofstream b(payload_path, std::ios::binary);
  if (!b) throw IoError("cannot write " + payload_path.string());
  const Eigen::Index count = model.values.size();
  std::vector<std::uint64_t> raw(static_cast<std::size_t>(count));
  for (Eigen::Index k = 0; k < count; ++k) raw[k] = to_little(std::bit_cast<std::uint64_t>(model.values.data()[k]));
  b.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
  if (!b) throw IoError("failed writing " + payload_path.string());
}

KdeModel load_model(const std::filesystem::path& header_path) {
  std::ifstream h(header_path);
  if (!h) throw IoError("cannot read " + header_path.string());
  json header;
  try {
    header = json::parse(h);
  } catch (const json::parse_error& e) {
    throw FormatError("kde header " + header_path.string() + ": " + e.what());
  }
  if (field<std::string>(header, "byte_order") != "little") throw FormatError("kde payload must be little-endian");
  if (field<std::string>(header, "dtype") != "f64") throw FormatError("kde payload must be f64");

  KdeModel model;
  model.grid.cell = field<double>(header, "cell_m");
  model.grid.nx = field<int>(header, "nx");
  model.grid.ny = field<int>(header, "ny");
  model.bw.h = field<double>(header, "h_m");
  model.n = field<std::size_t>(header, "n");
  model.max_value = field<double>(header, "max_value");
  const GeoPoint origin{field<double>(header, "origin_lat"), field<double>(header, "origin_lon")};
  model.frame = header.contains("frame_lat")
                    ? GeoPoint{field<double>(header, "frame_lat"), field<double>(header, "frame_lon")}
                    : origin;
  model.grid.origin = header.contains("origin_north_m")
                          ? local_point(field<double>(header, "origin_north_m"), field<double>(header, "origin_east_m"))
                          : project(origin, model.frame);
  try {
    model.grid.validate();
    model.bw.validate();
  } catch (const InvalidInput& e) {
    throw FormatError(std::string("kde header: ") + e.what());
  }

  const std::string payload_name =
      header.contains("payload") ? field<std::string>(header, "payload") : header_path.stem().string() + ".bin";
  const auto payload_path = header_path.parent_path() / payload_name;
  std::ifstream b(payload_path, std::ios::binary | std::ios::ate);
  if (!b) throw IoError("cannot read " + payload_path.string());
  const auto bytes = static_cast<std::uint64_t>(b.tellg());
  const std::uint64_t expected = static_cast<std::uint64_t>(model.grid.nx) * model.grid.ny * sizeof(double);
  if (bytes != expected)
    throw FormatError("kde payload has " + std::to_string(bytes) + " bytes, header implies " + std::to_string(expected));
  b.seekg(0);
  std::vector<std::uint64_t> raw(static_cast<std::size_t>(model.grid.nx) * model.grid.ny);
  b.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(expected));
  if (!b) throw IoError("failed reading " + payload_path.string());
  model.values.resize(model.grid.ny, model.grid.nx);
  for (std::size_t k = 0; k < raw.size(); ++k) model.values.data()[k] = std::bit_cast<double>(to_little(raw[k]));
  if ((model.values.array() < 0.0).any() || !model.values.allFinite())
    throw FormatError("kde payload holds negative or non-finite values");
  if (!(model.max_value > 0.0)) throw FormatError("kde header max_value must be positive");
  return model;
}

}  // namespace seaway
