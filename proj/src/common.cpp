#include "icausal/common.hpp"

namespace icausal {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DuplicateWire: return "DuplicateWire";
    case ErrorKind::UnknownWire: return "UnknownWire";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::BadSpec: return "BadSpec";
    case ErrorKind::NonMonotone: return "NonMonotone";
    case ErrorKind::BadTimeMap: return "BadTimeMap";
    case ErrorKind::MissingBlock: return "MissingBlock";
    case ErrorKind::AncillaMismatch: return "AncillaMismatch";
    case ErrorKind::IncompleteInstrument: return "IncompleteInstrument";
    case ErrorKind::NotPure: return "NotPure";
    case ErrorKind::NotIsometry: return "NotIsometry";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace icausal
