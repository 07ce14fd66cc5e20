#pragma once

#include <stdexcept>
#include <string>

namespace otoc::engines {

enum class Scheme { closed, fbte, pbte };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::closed: return "closed";
        case Scheme::fbte: return "fbte";
        case Scheme::pbte: return "pbte";
    }
    return "?";
}

inline Scheme scheme_from_name(const std::string& s) {
    if (s == "closed") return Scheme::closed;
    if (s == "fbte") return Scheme::fbte;
    if (s == "pbte") return Scheme::pbte;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

} // namespace otoc::engines
