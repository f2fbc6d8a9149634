#include "cli.hpp"

#include "feastsvd/errors.hpp"
#include "feastsvd/sparse.hpp"

#include <curl/curl.h>
#include <zlib.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace feast::cli {

namespace fs = std::filesystem;

namespace {

const char* kBaseUrl = "https://suitesparse-collection-website.herokuapp.com/MM";

size_t append_body(char* data, size_t size, size_t nmemb, void* user) {
    static_cast<std::string*>(user)->append(data, size * nmemb);
    return size * nmemb;
}

std::string download(const std::string& url) {
    static const bool inited = [] { return curl_global_init(CURL_GLOBAL_DEFAULT) == CURLE_OK; }();
    if (!inited) throw NetworkError("libcurl initialization failed");
    CURL* h = curl_easy_init();
    if (!h) throw NetworkError("libcurl handle creation failed");
    std::string body;
    curl_easy_setopt(h, CURLOPT_URL, url.c_str());
    curl_easy_setopt(h, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(h, CURLOPT_WRITEFUNCTION, append_body);
    curl_easy_setopt(h, CURLOPT_WRITEDATA, &body);
    curl_easy_setopt(h, CURLOPT_CONNECTTIMEOUT, 20L);
    curl_easy_setopt(h, CURLOPT_TIMEOUT, 600L);
    curl_easy_setopt(h, CURLOPT_FAILONERROR, 1L);
    CURLcode rc = curl_easy_perform(h);
    curl_easy_cleanup(h);
    if (rc != CURLE_OK) throw NetworkError(std::string("download failed: ") + curl_easy_strerror(rc));
    return body;
}

std::string gunzip(const std::string& gz) {
    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw IoError("zlib initialization failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(gz.data()));
    zs.avail_in = static_cast<uInt>(gz.size());
    std::string out;
    char buf[1 << 16];
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof(buf);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw IoError("corrupt gzip stream");
        }
        out.append(buf, sizeof(buf) - zs.avail_out);
        if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
            inflateEnd(&zs);
            throw IoError("truncated gzip stream");
        }
    }
    inflateEnd(&zs);
    return out;
}

unsigned long parse_octal(const char* p, std::size_t n) {
    unsigned long v = 0;
    for (std::size_t i = 0; i < n && p[i]; ++i) {
        if (p[i] == ' ') continue;
        if (p[i] < '0' || p[i] > '7') break;
        v = v * 8 + static_cast<unsigned long>(p[i] - '0');
    }
    return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

const std::vector<KnownMatrix>& known_matrices() {
    static const std::vector<KnownMatrix> list = {
        {"plat1919", "HB", 1919, 1919, false},
        {"rosen10", "Meszaros", 6152, 2056, true},
        {"GL7d12", "JGD_GL7d", 8899, 1019, false},
        {"3elt_dual", "AG-Monien", 9000, 9000, false},
        {"fv1", "Norris", 9604, 9604, false},
        {"shuttle_eddy", "Pothen", 10429, 10429, false},
        {"nopoly", "Gaertner", 10774, 10774, false},
        {"flower_5_4", "JGD_Homology", 14721, 5226, true},
        {"barth5", "Pothen", 15606, 15606, false},
        {"L-9", "AG-Monien", 17983, 17983, false},
        {"crack_dual", "AG-Monien", 20141, 20141, false},
        {"rel8", "JGD_Relat", 345688, 12347, false},
    };
    return list;
}

std::string cache_dir() {
    if (const char* env = std::getenv("FEAST_CACHE_DIR"); env && *env) return env;
    if (const char* home = std::getenv("HOME"); home && *home) return (fs::path(home) / ".cache" / "feastsvd").string();
    return (fs::temp_directory_path() / "feastsvd").string();
}

std::optional<std::string> extract_from_targz(const std::string& gz, const std::string& member_suffix) {
    std::string tar = gunzip(gz);
    std::size_t pos = 0;
    std::string long_name;
    while (pos + 512 <= tar.size()) {
        const char* hdr = tar.data() + pos;
        if (hdr[0] == '\0') break;
        std::string name(hdr, strnlen(hdr, 100));
        std::string prefix(hdr + 345, strnlen(hdr + 345, 155));
        if (!prefix.empty()) name = prefix + "/" + name;
        if (!long_name.empty()) {
            name = long_name;
            long_name.clear();
        }
        const unsigned long size = parse_octal(hdr + 124, 12);
        const char type = hdr[156];
        pos += 512;
        if (pos + size > tar.size()) throw IoError("truncated tar archive");
        if (type == 'L') {
            long_name.assign(tar.data() + pos, strnlen(tar.data() + pos, size));
        } else if ((type == '0' || type == '\0') && ends_with(name, member_suffix)) {
            return tar.substr(pos, size);
        }
        pos += (size + 511) / 512 * 512;
    }
    return std::nullopt;
}

int cmd_fetch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const KnownMatrix* entry = nullptr;
    for (const auto& km : known_matrices())
        if (cfg.fetch_name == km.name) entry = &km;
    if (!entry) {
        err << "error: unknown matrix '" << cfg.fetch_name << "'; known names:";
        for (const auto& km : known_matrices()) err << " " << km.name;
        err << "\n";
        return kError;
    }
    try {
        const std::string url = std::string(kBaseUrl) + "/" + entry->group + "/" + entry->name + ".tar.gz";
        std::string archive = download(url);
        auto member = extract_from_targz(archive, std::string("/") + entry->name + ".mtx");
        if (!member) throw IoError("archive does not contain " + std::string(entry->name) + ".mtx");

        fs::path dir = cache_dir();
        fs::create_directories(dir);
        fs::path target = dir / (std::string(entry->name) + ".mtx");
        fs::path tmp = target;
        tmp += ".part";
        {
            std::ofstream f(tmp, std::ios::binary);
            f.write(member->data(), static_cast<std::streamsize>(member->size()));
            if (!f) throw IoError("cannot write " + tmp.string());
        }
        SparseMatrix m;
        try {
            m = read_matrix_market(tmp.string());
        } catch (...) {
            fs::remove(tmp);
            throw;
        }
        long rows = entry->transposed ? entry->cols : entry->rows;
        long cols = entry->transposed ? entry->rows : entry->cols;
        if (m.rows() != rows || m.cols() != cols) {
            fs::remove(tmp);
            throw ChecksumMismatch("size mismatch for " + std::string(entry->name) + ": got " +
                                   std::to_string(m.rows()) + " x " + std::to_string(m.cols()));
        }
        fs::rename(tmp, target);
        out << "cached " << target.string() << " " << m.rows() << " x " << m.cols() << " nnz " << m.nnz() << "\n";
        return kOk;
    } catch (const NetworkError& e) {
        err << "error: " << e.what() << "\n";
        return kNetwork;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
}

}  // namespace feast::cli
