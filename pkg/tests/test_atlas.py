import pytest

from errors import OutOfRange
from services.atlas_service import AtlasRecord, AtlasStore, atlas_record, shard_pairs, write_atlas


def _lines(store):
    return [r.model_dump_json() for r in store.read_records()]


def test_shard_count_does_not_change_the_atlas(tmp_path):
    one = write_atlas(7, 1, out_dir=tmp_path / "one")
    two = write_atlas(7, 3, out_dir=tmp_path / "three")
    assert one["records"] == two["records"] == 17
    assert len(two["files"]) == 3
    assert _lines(AtlasStore(tmp_path / "one", 1)) == _lines(AtlasStore(tmp_path / "three", 3))


def test_shards_partition_by_n():
    pairs = [p for i in range(3) for p in shard_pairs(10, 3, i)]
    assert len(pairs) == len(set(pairs)) == 31
    assert all(p.n % 3 == 1 for p in shard_pairs(10, 3, 1))


def test_record_carries_degree8_classes():
    rec = atlas_record(29, 5)
    assert rec.chain == [6, 7, 2, 2, 3, 2, 2, 2, 2]
    assert len(rec.degree8) == 2
    assert AtlasRecord.model_validate_json(rec.model_dump_json()) == rec


def test_bad_arguments():
    with pytest.raises(OutOfRange):
        write_atlas(1)
    with pytest.raises(OutOfRange):
        AtlasStore(shards=0)
