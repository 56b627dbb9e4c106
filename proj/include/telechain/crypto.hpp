#pragma once

#include <memory>
#include <random>

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include "telechain/bytes.hpp"
#include "telechain/errors.hpp"

namespace telechain::crypto {

// Network-wide primitive choices: SHA-256 for every digest, Ed25519 (32-byte
// public keys) for every signature, X25519 + AES-256-CTR for the hybrid
// encryption of per-operator scrub files.

inline Hash256 sha256(const std::uint8_t* data, std::size_t len) {
    Hash256 out;
    SHA256(data, len, out.data());
    return out;
}

inline Hash256 sha256(const Bytes& b) { return sha256(b.data(), b.size()); }
inline Hash256 sha256(std::string_view s) {
    return sha256(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

inline Hash256 hmac_sha256(const Bytes& key, const Bytes& msg) {
    Hash256 out;
    unsigned int len = 32;
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
              msg.data(), msg.size(), out.data(), &len) || len != 32)
        throw Error(ErrorCode::VerificationFailed, "hmac failure");
    return out;
}

inline Hash256 hmac_sha256(std::string_view key, std::string_view msg) {
    return hmac_sha256(to_bytes(key), to_bytes(msg));
}

namespace detail {
struct PkeyDeleter {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;

struct CtxDeleter {
    void operator()(EVP_PKEY_CTX* c) const { EVP_PKEY_CTX_free(c); }
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
    void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};

inline PkeyPtr raw_private(int type, const Bytes& seed) {
    EVP_PKEY* p = EVP_PKEY_new_raw_private_key(type, nullptr, seed.data(), seed.size());
    if (!p) throw Error(ErrorCode::VerificationFailed, "raw private key load failed");
    return PkeyPtr(p);
}

inline PkeyPtr raw_public(int type, const Bytes& pub) {
    EVP_PKEY* p = EVP_PKEY_new_raw_public_key(type, nullptr, pub.data(), pub.size());
    if (!p) throw Error(ErrorCode::VerificationFailed, "raw public key load failed");
    return PkeyPtr(p);
}

inline Bytes raw_public_bytes(EVP_PKEY* key) {
    std::size_t len = 0;
    EVP_PKEY_get_raw_public_key(key, nullptr, &len);
    Bytes out(len);
    if (!EVP_PKEY_get_raw_public_key(key, out.data(), &len))
        throw Error(ErrorCode::VerificationFailed, "raw public key export failed");
    out.resize(len);
    return out;
}
}  // namespace detail

struct KeyPair {
    Bytes seed;        // 32-byte private seed
    Bytes public_key;  // 32-byte public key
};

// Deterministic keypair from a 32-byte seed; the harness derives node seeds
// from the scenario seed so whole runs are reproducible.
inline KeyPair ed25519_keypair(const Bytes& seed) {
    if (seed.size() != 32) throw Error(ErrorCode::BadFormat, "ed25519 seed must be 32 bytes");
    auto sk = detail::raw_private(EVP_PKEY_ED25519, seed);
    return KeyPair{seed, detail::raw_public_bytes(sk.get())};
}

inline Bytes ed25519_sign(const Bytes& seed, const Bytes& msg) {
    auto sk = detail::raw_private(EVP_PKEY_ED25519, seed);
    std::unique_ptr<EVP_MD_CTX, detail::CtxDeleter> ctx(EVP_MD_CTX_new());
    if (!EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, sk.get()))
        throw Error(ErrorCode::VerificationFailed, "sign init failed");
    std::size_t sig_len = 64;
    Bytes sig(sig_len);
    if (!EVP_DigestSign(ctx.get(), sig.data(), &sig_len, msg.data(), msg.size()))
        throw Error(ErrorCode::VerificationFailed, "sign failed");
    sig.resize(sig_len);
    return sig;
}

inline bool ed25519_verify(const Bytes& public_key, const Bytes& msg, const Bytes& sig) {
    if (public_key.size() != 32 || sig.size() != 64) return false;
    try {
        auto pk = detail::raw_public(EVP_PKEY_ED25519, public_key);
        std::unique_ptr<EVP_MD_CTX, detail::CtxDeleter> ctx(EVP_MD_CTX_new());
        if (!EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pk.get())) return false;
        return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), msg.data(), msg.size()) == 1;
    } catch (const Error&) {
        return false;
    }
}

inline KeyPair x25519_keypair(const Bytes& seed) {
    if (seed.size() != 32) throw Error(ErrorCode::BadFormat, "x25519 seed must be 32 bytes");
    auto sk = detail::raw_private(EVP_PKEY_X25519, seed);
    return KeyPair{seed, detail::raw_public_bytes(sk.get())};
}

inline Bytes x25519_shared(const Bytes& my_seed, const Bytes& peer_public) {
    auto sk = detail::raw_private(EVP_PKEY_X25519, my_seed);
    auto pk = detail::raw_public(EVP_PKEY_X25519, peer_public);
    std::unique_ptr<EVP_PKEY_CTX, detail::CtxDeleter> ctx(EVP_PKEY_CTX_new(sk.get(), nullptr));
    if (!ctx || EVP_PKEY_derive_init(ctx.get()) <= 0 ||
        EVP_PKEY_derive_set_peer(ctx.get(), pk.get()) <= 0)
        throw Error(ErrorCode::VerificationFailed, "x25519 derive init failed");
    std::size_t len = 32;
    Bytes out(len);
    if (EVP_PKEY_derive(ctx.get(), out.data(), &len) <= 0)
        throw Error(ErrorCode::VerificationFailed, "x25519 derive failed");
    out.resize(len);
    return out;
}

namespace detail {
inline Bytes aes256ctr(const Bytes& key, const Bytes& iv, const Bytes& input) {
    std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter> ctx(EVP_CIPHER_CTX_new());
    if (!EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_ctr(), nullptr, key.data(), iv.data()))
        throw Error(ErrorCode::VerificationFailed, "cipher init failed");
    Bytes out(input.size() + 16);
    int len = 0, total = 0;
    if (!EVP_EncryptUpdate(ctx.get(), out.data(), &len, input.data(),
                           static_cast<int>(input.size())))
        throw Error(ErrorCode::VerificationFailed, "cipher update failed");
    total = len;
    if (!EVP_EncryptFinal_ex(ctx.get(), out.data() + total, &len))
        throw Error(ErrorCode::VerificationFailed, "cipher final failed");
    total += len;
    out.resize(total);
    return out;
}
}  // namespace detail

// Hybrid encryption: ephemeral X25519 keypair, ECDH against the recipient
// key, symmetric key = SHA-256(shared || eph_pub || recipient_pub).
// Layout: eph_pub(32) || ciphertext.
inline Bytes hybrid_encrypt(const Bytes& ephemeral_seed, const Bytes& recipient_public,
                            const Bytes& plaintext) {
    KeyPair eph = x25519_keypair(ephemeral_seed);
    Bytes shared = x25519_shared(eph.seed, recipient_public);
    Writer km;
    km.put_raw(shared);
    km.put_raw(eph.public_key);
    km.put_raw(recipient_public);
    Hash256 kh = sha256(km.bytes());
    Bytes key(kh.begin(), kh.end());
    Bytes iv(16, 0);  // key is unique per message
    Bytes ct = detail::aes256ctr(key, iv, plaintext);
    Bytes out = eph.public_key;
    out.insert(out.end(), ct.begin(), ct.end());
    return out;
}

inline Bytes hybrid_decrypt(const Bytes& recipient_seed, const Bytes& ciphertext) {
    if (ciphertext.size() < 32) throw Error(ErrorCode::BadFormat, "ciphertext too short");
    Bytes eph_pub(ciphertext.begin(), ciphertext.begin() + 32);
    Bytes ct(ciphertext.begin() + 32, ciphertext.end());
    Bytes shared = x25519_shared(recipient_seed, eph_pub);
    KeyPair self = x25519_keypair(recipient_seed);
    Writer km;
    km.put_raw(shared);
    km.put_raw(eph_pub);
    km.put_raw(self.public_key);
    Hash256 kh = sha256(km.bytes());
    Bytes key(kh.begin(), kh.end());
    Bytes iv(16, 0);
    return detail::aes256ctr(key, iv, ct);  // CTR mode is its own inverse
}

// Deterministic RNG for everything the simulation randomizes: token ids,
// ephemeral encryption keys, OTPs, delivery coin flips.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    std::uint64_t below(std::uint64_t bound) {
        return bound == 0 ? 0 : engine_() % bound;
    }

    double unit() {
        return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

    Bytes bytes(std::size_t n) {
        Bytes out(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (i % 8 == 0) cache_ = engine_();
            out[i] = static_cast<std::uint8_t>(cache_ >> ((i % 8) * 8));
        }
        return out;
    }

    // Independent child stream, stable under unrelated draws from the parent.
    DetRng derive(std::string_view label) const {
        Writer w;
        w.put_u64(seed_mix_);
        w.put_str(label);
        Hash256 h = sha256(w.bytes());
        std::uint64_t s = 0;
        for (int i = 0; i < 8; ++i) s = (s << 8) | h[i];
        return seeded(s);
    }

    static DetRng seeded(std::uint64_t seed) {
        DetRng r(seed);
        r.seed_mix_ = seed;
        return r;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t cache_ = 0;
    std::uint64_t seed_mix_ = 0;
};

inline Bytes derive_seed(std::uint64_t master, std::string_view label) {
    Writer w;
    w.put_u64(master);
    w.put_str(label);
    Hash256 h = sha256(w.bytes());
    return Bytes(h.begin(), h.end());
}

}  // namespace telechain::crypto
