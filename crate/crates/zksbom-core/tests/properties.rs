//! Randomized property suites over the public API: identifier
//! canonicalization, hash/signature behavior, commitment completeness and
//! soundness at medium scale, and the salting rationale (a dictionary
//! attack that must fail against real proofs and succeed against an
//! unsalted control).
//!
//! Everything is driven by seeded generators, so failures reproduce.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use zksbom_core::crypto::{self, Keypair, TAG_LEAF, TAG_NODE};
use zksbom_core::model::{ComponentId, Digest, Ecosystem};
use zksbom_core::sbom::components_to_datastore;
use zksbom_core::zks::{self, ProofKind, Seed};

fn rand_segment(rng: &mut StdRng, min: usize, max: usize) -> String {
    const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789.-_";
    let len = rng.random_range(min..=max);
    (0..len)
        .map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())] as char)
        .collect()
}

fn random_component(rng: &mut StdRng) -> ComponentId {
    let ecosystem = Ecosystem::ALL[rng.random_range(0..Ecosystem::ALL.len())];
    let group = rng
        .random_bool(0.4)
        .then(|| rand_segment(rng, 1, 12));
    let name = rand_segment(rng, 1, 16);
    let version = rand_segment(rng, 1, 8);
    ComponentId::new(group.as_deref(), &name, &version, ecosystem).unwrap()
}

#[test]
fn component_ids_round_trip_and_canonical_forms_are_injective() {
    let mut rng = StdRng::seed_from_u64(0xC0FFEE);
    let mut by_canonical: std::collections::HashMap<String, ComponentId> =
        std::collections::HashMap::new();
    let mut by_digest: std::collections::HashMap<Digest, String> =
        std::collections::HashMap::new();

    for _ in 0..1000 {
        let id = random_component(&mut rng);
        let canonical = id.canonical();
        assert_eq!(
            ComponentId::parse(&canonical).unwrap(),
            id,
            "round-trip failed for {canonical}"
        );
        // Equal canonical strings must come from equal ids, and equal
        // label digests from equal canonical strings.
        if let Some(prev) = by_canonical.insert(canonical.clone(), id.clone()) {
            assert_eq!(prev, id);
        }
        let label = crypto::hash(canonical.as_bytes());
        if let Some(prev) = by_digest.insert(label, canonical.clone()) {
            assert_eq!(prev, canonical);
        }
    }
}

#[test]
fn hash_is_deterministic_and_collision_free_in_samples() {
    let mut rng = StdRng::seed_from_u64(0xBEEF);
    for _ in 0..1000 {
        let len = rng.random_range(0..64);
        let x: Vec<u8> = (0..len).map(|_| rng.random()).collect();
        assert_eq!(crypto::hash(&x), crypto::hash(&x));
    }
    for _ in 0..1000 {
        let a: Vec<u8> = (0..rng.random_range(1..64)).map(|_| rng.random()).collect();
        let b: Vec<u8> = (0..rng.random_range(1..64)).map(|_| rng.random()).collect();
        if a != b {
            assert_ne!(crypto::hash(&a), crypto::hash(&b));
        }
    }
}

#[test]
fn keygen_is_injective_and_signing_is_complete_over_random_inputs() {
    let mut rng = StdRng::seed_from_u64(0xD00D);
    for _ in 0..100 {
        let s1: [u8; 32] = rng.random();
        let s2: [u8; 32] = rng.random();
        if s1 != s2 {
            assert_ne!(
                Keypair::from_seed(s1).public_key(),
                Keypair::from_seed(s2).public_key()
            );
        }
        let kp = Keypair::from_seed(s1);
        let msg: Vec<u8> = (0..rng.random_range(0..128)).map(|_| rng.random()).collect();
        assert!(kp.public_key().verify(&msg, &kp.sign(&msg)));
    }
}

#[test]
fn every_single_bit_signature_mutation_fails_verification() {
    let mut rng = StdRng::seed_from_u64(0xF1A9);
    for _ in 0..3 {
        let kp = Keypair::from_seed(rng.random());
        let msg: Vec<u8> = (0..48).map(|_| rng.random()).collect();
        let sig = kp.sign(&msg);
        for byte in 0..sig.len() {
            for bit in 0..8 {
                let mut mutated = sig.clone();
                mutated[byte] ^= 1 << bit;
                assert!(
                    !kp.public_key().verify(&msg, &mutated),
                    "mutation at byte {byte} bit {bit} verified"
                );
            }
        }
    }
}

#[test]
fn datastore_construction_is_idempotent() {
    let mut rng = StdRng::seed_from_u64(0x1DE);
    let components: Vec<ComponentId> = (0..50).map(|_| random_component(&mut rng)).collect();
    let a = components_to_datastore(&components);
    let b = components_to_datastore(&components);
    assert_eq!(a, b);
    let rendered_a: Vec<(String, String)> = a
        .iter()
        .map(|e| (e.label.to_hex(), e.value.clone()))
        .collect();
    let rendered_b: Vec<(String, String)> = b
        .iter()
        .map(|e| (e.label.to_hex(), e.value.clone()))
        .collect();
    assert_eq!(rendered_a, rendered_b);
}

#[test]
fn random_states_are_complete_and_reject_replays() {
    let mut rng = StdRng::seed_from_u64(0x5EED);
    for round in 0..100 {
        let n = rng.random_range(0..=32);
        let components: Vec<ComponentId> = (0..n).map(|_| random_component(&mut rng)).collect();
        let datastore = components_to_datastore(&components);
        let seed = Seed::from_bytes(rng.random());
        let (commitment, state) = zks::commit(datastore.clone(), seed);

        for entry in datastore.iter() {
            let (proof, value) = zks::query(&state, &entry.label);
            assert_eq!(proof.kind, ProofKind::Inclusion, "round {round}");
            assert!(zks::verify(&commitment, &entry.label, value.as_deref(), &proof));
        }
        for _ in 0..8 {
            let absent = crypto::hash(&rng.random::<[u8; 16]>());
            if datastore.contains(&absent) {
                continue;
            }
            let (proof, value) = zks::query(&state, &absent);
            assert_eq!(proof.kind, ProofKind::NonInclusion);
            assert!(value.is_none());
            assert!(zks::verify(&commitment, &absent, None, &proof));
        }

        // Same datastore, different seed: proofs must not transfer.
        let (other_commitment, other_state) =
            zks::commit(datastore.clone(), Seed::from_bytes(rng.random()));
        if let Some(entry) = datastore.entries().first() {
            let (proof, value) = zks::query(&other_state, &entry.label);
            assert!(!zks::verify(&commitment, &entry.label, value.as_deref(), &proof));
            let (proof, value) = zks::query(&state, &entry.label);
            assert!(!zks::verify(&other_commitment, &entry.label, value.as_deref(), &proof));
        }
    }
}

#[test]
fn verification_is_local_to_commitment_label_value_proof() {
    let components: Vec<ComponentId> = (0..8)
        .map(|i| ComponentId::new(None, &format!("local{i}"), "1", Ecosystem::Npm).unwrap())
        .collect();
    let (commitment, state) = zks::commit(
        components_to_datastore(&components),
        Seed::from_bytes([0x66; 32]),
    );
    let label = crypto::hash(b"local3@1@NPM");
    let (proof, value) = zks::query(&state, &label);
    drop(state);

    // Verification succeeds on a thread holding nothing but the four
    // arguments — no datastore, no seed.
    let handle = std::thread::spawn(move || {
        zks::verify(&commitment, &label, value.as_deref(), &proof)
    });
    assert!(handle.join().unwrap());
}

/// Minimal reimplementation of the tree's digest rules with a fixed
/// all-zero salt: the attacker's model of an *unsalted* deployment, and the
/// control construction the salted scheme is measured against.
mod unsalted {
    use super::*;

    pub fn empty(depth: usize) -> Digest {
        let mut e = Digest::ZERO;
        for _ in depth..256 {
            e = crypto::hash_parts(&[&[TAG_NODE], e.as_ref(), e.as_ref()]);
        }
        e
    }

    pub fn leaf(label: &Digest, value: &str) -> Digest {
        crypto::hash_parts(&[
            &[TAG_LEAF],
            Digest::ZERO.as_ref(),
            label.as_ref(),
            crypto::hash(value.as_bytes()).as_ref(),
        ])
    }

    /// Digest at `to_depth` of a one-leaf subtree (empty siblings below).
    pub fn spine(label: &Digest, value: &str, to_depth: usize) -> Digest {
        let mut acc = leaf(label, value);
        for i in (to_depth..256).rev() {
            let e = empty(i + 1);
            acc = if label.bit(i) {
                crypto::hash_parts(&[&[TAG_NODE], e.as_ref(), acc.as_ref()])
            } else {
                crypto::hash_parts(&[&[TAG_NODE], acc.as_ref(), e.as_ref()])
            };
        }
        acc
    }
}

#[test]
fn dictionary_attack_on_proof_siblings_fails_against_salted_commitments() {
    let a = ComponentId::parse("a@1@NPM").unwrap();
    let b = ComponentId::parse("b@1@NPM").unwrap();
    let label_a = crypto::hash(b"a@1@NPM");
    let label_b = crypto::hash(b"b@1@NPM");

    // The attacker's dictionary: every digest an unsalted tree could expose
    // about either component — plain label hashes, unsalted leaves, and
    // unsalted spine digests at every depth.
    let mut dictionary = std::collections::HashSet::new();
    for (label, value) in [(label_a, "a@1@NPM"), (label_b, "b@1@NPM")] {
        dictionary.insert(label);
        dictionary.insert(crypto::hash(value.as_bytes()));
        for depth in 0..=256 {
            dictionary.insert(unsalted::spine(&label, value, depth));
        }
    }

    // Control: in a deliberately unsalted two-entry tree, the sibling at
    // the divergence depth of a member path is exactly the other entry's
    // spine — the attack must land there, or the dictionary is wrong.
    let divergence = (0..256)
        .find(|&i| label_a.bit(i) != label_b.bit(i))
        .expect("distinct labels diverge");
    let control_sibling = unsalted::spine(&label_b, "b@1@NPM", divergence + 1);
    assert!(
        dictionary.contains(&control_sibling),
        "control failed: dictionary misses the unsalted sibling"
    );

    // The real, salted commitment: no sibling on any queried path may
    // appear in the dictionary, else proofs leak co-committed components.
    let (_, state) = zks::commit(
        components_to_datastore(&[a, b]),
        Seed::from_bytes([0x31; 32]),
    );
    let absent = crypto::hash(b"absent@9@NPM");
    for label in [label_a, label_b, absent] {
        let (proof, _) = zks::query(&state, &label);
        for sibling in &proof.siblings {
            assert!(
                !dictionary.contains(sibling),
                "salted proof sibling matched an unsalted dictionary entry"
            );
        }
    }
}
