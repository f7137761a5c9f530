def paginate(total, page=1, per_page=20):
    """
    Paginate a range of row indices

    Args:
        total: Number of rows
        page: Page number (1-indexed)
        per_page: Rows per page

    Returns:
        dict with 'items' (a (start, stop) pair) and 'pagination' keys
    """
    per_page = max(1, int(per_page))
    pages = max(1, -(-total // per_page))

    # Ensure valid page number
    page = min(max(1, page), pages)

    start = min((page - 1) * per_page, total)
    stop = min(start + per_page, total)

    return {
        'items': (start, stop),
        'pagination': {
            'page': page,
            'per_page': per_page,
            'total_items': total,
            'total_pages': pages,
            'has_next': page < pages,
            'has_prev': page > 1,
            'next_page': page + 1 if page < pages else None,
            'prev_page': page - 1 if page > 1 else None
        }
    }


def row_pages(total, workers=1):
    """Split `total` rows into at most `workers` contiguous (start, stop) pages"""
    workers = max(1, min(int(workers), total))
    per_page = -(-total // workers)
    pages = []
    page = 1
    while True:
        result = paginate(total, page, per_page)
        start, stop = result['items']
        if stop > start:
            pages.append((start, stop))
        if not result['pagination']['has_next']:
            return pages
        page = result['pagination']['next_page']
