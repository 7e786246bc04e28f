#include "egat/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace egat {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

void write_le_doubles(std::ostream& out, const std::vector<double>& vals) {
    for (double v : vals) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        unsigned char bytes[8];
        for (int b = 0; b < 8; ++b) {
            bytes[b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xffu);
        }
        out.write(reinterpret_cast<const char*>(bytes), 8);
    }
}

bool read_le_doubles(std::istream& in, std::vector<double>& vals) {
    for (double& v : vals) {
        unsigned char bytes[8];
        if (!in.read(reinterpret_cast<char*>(bytes), 8)) return false;
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) {
            bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
        }
        std::memcpy(&v, &bits, sizeof(v));
    }
    return true;
}

} // namespace

json model_config_to_json(const ModelConfig& cfg) {
    return json{{"num_layers", cfg.num_layers},
                {"num_heads", cfg.num_heads},
                {"hidden_h", cfg.hidden_h},
                {"hidden_e", cfg.hidden_e},
                {"num_classes", cfg.num_classes},
                {"in_h", cfg.in_h},
                {"in_e", cfg.in_e},
                {"sigma", cfg.sigma},
                {"leaky_slope", cfg.leaky_slope},
                {"dropout", cfg.dropout},
                {"attn_dropout", cfg.attn_dropout},
                {"use_edge_features", cfg.use_edge_features},
                {"classifier_elu", cfg.classifier_elu},
                {"lr", cfg.lr},
                {"l2", cfg.l2},
                {"seed", cfg.seed}};
}

ModelConfig model_config_from_json(const json& j) {
    if (!j.is_object()) throw IoError("model config: expected a JSON object");
    ModelConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "num_layers") cfg.num_layers = value.get<int>();
            else if (key == "num_heads") cfg.num_heads = value.get<int>();
            else if (key == "hidden_h") cfg.hidden_h = value.get<int>();
            else if (key == "hidden_e") cfg.hidden_e = value.get<int>();
            else if (key == "num_classes") cfg.num_classes = value.get<int>();
            else if (key == "in_h") cfg.in_h = value.get<int>();
            else if (key == "in_e") cfg.in_e = value.get<int>();
            else if (key == "sigma") cfg.sigma = value.get<std::string>();
            else if (key == "leaky_slope") cfg.leaky_slope = value.get<double>();
            else if (key == "dropout") cfg.dropout = value.get<double>();
            else if (key == "attn_dropout") cfg.attn_dropout = value.get<double>();
            else if (key == "use_edge_features") cfg.use_edge_features = value.get<bool>();
            else if (key == "classifier_elu") cfg.classifier_elu = value.get<bool>();
            else if (key == "lr") cfg.lr = value.get<double>();
            else if (key == "l2") cfg.l2 = value.get<double>();
            else if (key == "seed") cfg.seed = value.get<unsigned long long>();
            else throw IoError("model config: unknown key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("model config: ill-typed value: ") + e.what());
    }
    return cfg;
}

void save_checkpoint(const Model& model, const std::string& path) {
    const auto params = model.parameters();
    json manifest = json::array();
    for (std::size_t i = 0; i < params.size(); ++i) {
        manifest.push_back(json{{"index", i},
                                {"rows", params[i].rows()},
                                {"cols", params[i].cols()}});
    }
    const json header{{"format_version", kFormatVersion},
                      {"config", model_config_to_json(model.config)},
                      {"manifest", manifest}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("checkpoint: cannot write " + path);
    out << header.dump() << '\n';
    for (const auto& p : params) write_le_doubles(out, p.values());
    if (!out) throw IoError("checkpoint: write failed for " + path);
}

Model load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("checkpoint: cannot open " + path);
    std::string header_line;
    if (!std::getline(in, header_line)) throw IoError("checkpoint: corrupt file (no header)");
    json header;
    try {
        header = json::parse(header_line);
    } catch (const json::exception& e) {
        throw IoError(std::string("checkpoint: corrupt header: ") + e.what());
    }
    const int version = header.value("format_version", -1);
    if (version != kFormatVersion) {
        throw IoError("checkpoint: format version mismatch (file has " +
                      std::to_string(version) + ", expected " + std::to_string(kFormatVersion) +
                      ")");
    }
    if (!header.contains("config") || !header.contains("manifest")) {
        throw IoError("checkpoint: corrupt header (missing config or manifest)");
    }
    Model model = init_model(model_config_from_json(header["config"]), 0);
    const auto params = model.parameters();
    const json& manifest = header["manifest"];
    if (!manifest.is_array() || manifest.size() != params.size()) {
        throw IoError("checkpoint: manifest does not match the model's parameter list");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const int rows = manifest[i].value("rows", -1);
        const int cols = manifest[i].value("cols", -1);
        if (rows != params[i].rows() || cols != params[i].cols()) {
            throw IoError("checkpoint: parameter " + std::to_string(i) +
                          " shape mismatch (file has " + std::to_string(rows) + "x" +
                          std::to_string(cols) + ")");
        }
        if (!read_le_doubles(in, params[i].impl()->values)) {
            throw IoError("checkpoint: corrupt file (truncated payload)");
        }
    }
    char extra;
    if (in.read(&extra, 1)) throw IoError("checkpoint: corrupt file (trailing bytes)");
    return model;
}

} // namespace egat
