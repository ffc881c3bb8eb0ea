#include "pondwatch/feed_export.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace pondwatch {
namespace {

using nlohmann::json;

// RFC-4180: quote a cell only when it needs it.
std::string csv_cell(const std::string& raw) {
    if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string xml_escape(const std::string& raw) {
    std::string out;
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string to_csv(const Channel& channel, const std::vector<FeedEntry>& entries) {
    std::ostringstream out;
    out << "created_at,entry_id";
    for (std::size_t f = 1; f <= channel.field_labels.size(); ++f) out << ",field" << f;
    out << '\n';
    for (const FeedEntry& entry : entries) {
        out << format_iso8601(entry.created_at) << ',' << entry.entry_id;
        for (const auto& value : entry.values) {
            out << ',';
            if (value) out << csv_cell(format_double(*value));
        }
        out << '\n';
    }
    return out.str();
}

json channel_to_json(const Channel& channel) {
    json doc;
    doc["id"] = channel.channel_id;
    doc["name"] = channel.name;
    doc["created_at"] = format_iso8601(channel.created_at);
    for (std::size_t f = 0; f < channel.field_labels.size(); ++f) {
        doc["field" + std::to_string(f + 1)] = channel.field_labels[f];
    }
    return doc;
}

std::string to_json(const Channel& channel, const std::vector<FeedEntry>& entries) {
    json doc;
    doc["channel"] = channel_to_json(channel);
    json feeds = json::array();
    for (const FeedEntry& entry : entries) {
        json item;
        item["created_at"] = format_iso8601(entry.created_at);
        item["entry_id"] = entry.entry_id;
        for (std::size_t f = 0; f < entry.values.size(); ++f) {
            const std::string key = "field" + std::to_string(f + 1);
            if (entry.values[f]) item[key] = *entry.values[f];
            else item[key] = nullptr;
        }
        feeds.push_back(std::move(item));
    }
    doc["feeds"] = std::move(feeds);
    return doc.dump() + "\n";
}

std::string to_xml(const Channel& channel, const std::vector<FeedEntry>& entries) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<channel>\n";
    out << "  <id>" << channel.channel_id << "</id>\n";
    out << "  <name>" << xml_escape(channel.name) << "</name>\n";
    out << "  <created-at>" << format_iso8601(channel.created_at) << "</created-at>\n";
    for (std::size_t f = 0; f < channel.field_labels.size(); ++f) {
        out << "  <field" << (f + 1) << ">" << xml_escape(channel.field_labels[f]) << "</field"
            << (f + 1) << ">\n";
    }
    out << "  <feeds>\n";
    for (const FeedEntry& entry : entries) {
        out << "    <feed>\n";
        out << "      <created-at>" << format_iso8601(entry.created_at) << "</created-at>\n";
        out << "      <entry-id>" << entry.entry_id << "</entry-id>\n";
        for (std::size_t f = 0; f < entry.values.size(); ++f) {
            if (entry.values[f]) {
                out << "      <field" << (f + 1) << ">" << format_double(*entry.values[f])
                    << "</field" << (f + 1) << ">\n";
            } else {
                out << "      <field" << (f + 1) << "/>\n";
            }
        }
        out << "    </feed>\n";
    }
    out << "  </feeds>\n</channel>\n";
    return out.str();
}

}  // namespace

std::optional<FeedFormat> parse_feed_format(std::string_view name) {
    if (name == "csv") return FeedFormat::Csv;
    if (name == "json") return FeedFormat::Json;
    if (name == "xml") return FeedFormat::Xml;
    return std::nullopt;
}

std::string_view feed_format_content_type(FeedFormat format) {
    switch (format) {
        case FeedFormat::Csv: return "text/csv";
        case FeedFormat::Json: return "application/json";
        case FeedFormat::Xml: return "application/xml";
    }
    return "application/octet-stream";
}

std::string export_feed(const Channel& channel, const std::vector<FeedEntry>& entries,
                        FeedFormat format) {
    switch (format) {
        case FeedFormat::Csv: return to_csv(channel, entries);
        case FeedFormat::Json: return to_json(channel, entries);
        case FeedFormat::Xml: return to_xml(channel, entries);
    }
    throw ValidationError("unknown export format");
}

}  // namespace pondwatch
